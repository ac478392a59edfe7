//! `wadge`: tree utilities, operator application, witness verification,
//! game running, and an interactive play loop.

mod commands;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "wadge", version, about = "games and reductions on Baire space, at desk scale")]
struct Cli {
    /// Seed for all sampling; identical invocations with identical seeds
    /// produce byte-identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output depth for comparisons.
    #[arg(long, global = true, default_value_t = 10)]
    depth: usize,
    /// Number of samples for verification commands.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Write the primary result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tree utilities: encode, decode, bisim, props, derive, linearize,
    /// star, indlabel.
    Tree(commands::tree::TreeArgs),
    /// Apply an operator to a point or tree file.
    Apply(commands::apply::ApplyArgs),
    /// Verify witnesses, cylinder laws, and transparency pairs.
    Verify(commands::verify::VerifyArgs),
    /// Run a game with scripted players and print the transcript.
    Run(commands::run::RunArgs),
    /// Play a game interactively on standard input/output.
    Play(commands::play::PlayArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Ctx {
        seed: cli.seed,
        depth: cli.depth,
        samples: cli.samples,
        out: cli.out,
    };
    let result = match cli.command {
        Command::Tree(args) => commands::tree::run(&ctx, args),
        Command::Apply(args) => commands::apply::run(&ctx, args),
        Command::Verify(args) => commands::verify::run(&ctx, args),
        Command::Run(args) => commands::run::run(&ctx, args),
        Command::Play(args) => commands::play::run(&ctx, args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
