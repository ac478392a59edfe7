use super::Ctx;
use clap::{Args, Subcommand};
use std::process::ExitCode;
use wadge_core::weihrauch::{
    cylinder_check, samples_for, transparency_check, verify_witness, DEFAULT_FUEL,
};

#[derive(Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    cmd: VerifyCmd,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Verify a catalog witness against its target's exact evaluator.
    Witness { name: String },
    /// Verify the cylinder law of td, lim, or linearize.
    Cylinder { op: String },
    /// Verify a transparency consequence pair for an operator.
    Transparency {
        op: String,
        #[arg(long, default_value = "inc-labels")]
        g: String,
        #[arg(long, default_value = "inc-labels")]
        f: String,
    },
}

pub fn run(ctx: &Ctx, args: VerifyArgs) -> Result<ExitCode, String> {
    match args.cmd {
        VerifyCmd::Witness { name } => {
            let samples = samples_for(&name, ctx.seed, ctx.samples);
            let report =
                verify_witness(&name, &samples, ctx.depth, DEFAULT_FUEL).map_err(|e| e.to_string())?;
            ctx.emit(&report.render())?;
            Ok(if report.strict_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        VerifyCmd::Cylinder { op } => {
            let witness = match op.as_str() {
                "td" => "cyl-TD",
                "lim" => "cyl-lim",
                "linearize" => "cyl-Linearize",
                other => return Err(format!("no cylinder check for operator {other}")),
            };
            let samples = samples_for(witness, ctx.seed, ctx.samples);
            let report =
                cylinder_check(&op, &samples, ctx.depth, DEFAULT_FUEL).map_err(|e| e.to_string())?;
            ctx.emit(&report.render())?;
            Ok(if report.strict_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        VerifyCmd::Transparency { op, g, f } => {
            let samples = samples_for(&op, ctx.seed, ctx.samples);
            let report = transparency_check(&op, &g, &f, &samples, ctx.depth)
                .map_err(|e| e.to_string())?;
            ctx.emit(&report.render())?;
            Ok(if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}
