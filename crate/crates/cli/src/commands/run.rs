use super::{load_point, Ctx};
use clap::Args;
use std::path::PathBuf;
use std::process::ExitCode;
use wadge_core::games::{
    baire1_strategy, baire2_strategy, copy_strategy, run_game, strategy_from_witness, target,
    FrontEnd, GameConfig, StrategyII,
};
use wadge_core::weihrauch::{build_witness, identity_witness};

#[derive(Args)]
pub struct RunArgs {
    /// Game front end: wadge, eraser, backtrack, or tree.
    #[arg(long)]
    game: String,
    /// Derivative depth of the tree game.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Tree game with linearization instead of a bare derivative.
    #[arg(long)]
    linear: bool,
    /// Target name: id, lim, limdelta, isfinite, baire1, baire2, or zt
    /// (the game's own composite).
    #[arg(long, default_value = "zt")]
    target: String,
    /// Player II: copy, certify-copy, from-witness:<name>, baire1, baire2.
    #[arg(long, default_value = "copy")]
    ii: String,
    #[arg(long, default_value_t = 50)]
    rounds: usize,
    /// Player I's script: a point file.
    #[arg(long)]
    i_script: PathBuf,
}

pub fn front_end_of(name: &str, n: u32, linear: bool) -> Result<FrontEnd, String> {
    Ok(match name {
        "wadge" => FrontEnd::Wadge,
        "eraser" => FrontEnd::Eraser,
        "backtrack" => FrontEnd::Backtrack,
        "tree" => FrontEnd::Tree {
            derivative_depth: n,
            linear,
        },
        other => return Err(format!("unknown game: {other}")),
    })
}

pub fn build_config(
    game: &str,
    n: u32,
    linear: bool,
    target_name: &str,
    rounds: usize,
) -> Result<GameConfig, String> {
    let fe = front_end_of(game, n, linear)?;
    let placeholder = target("id").expect("id target");
    let mut cfg = GameConfig::classic(fe, placeholder, rounds).map_err(|e| e.to_string())?;
    cfg.target = match target_name {
        "zt" => cfg.zt_target(),
        name => target(name).ok_or_else(|| format!("unknown target: {name}"))?,
    };
    Ok(cfg)
}

pub fn build_ii(spec: &str, cfg: &GameConfig) -> Result<Box<dyn StrategyII>, String> {
    if let Some(name) = spec.strip_prefix("from-witness:") {
        let w = if name == "identity" {
            identity_witness(&cfg.operator.name, &cfg.target.name)
        } else {
            build_witness(name).map_err(|e| e.to_string())?
        };
        let builder = strategy_from_witness(&w, cfg.front_end).map_err(|e| e.to_string())?;
        return Ok(builder());
    }
    Ok(match spec {
        "copy" => copy_strategy(false),
        "certify-copy" => copy_strategy(true),
        "baire1" => baire1_strategy(|v| v, |v| v + 1),
        "baire2" => baire2_strategy(|v| v % 2, |v| v + 1, 16),
        other => return Err(format!("unknown strategy: {other}")),
    })
}

pub fn run(ctx: &Ctx, args: RunArgs) -> Result<ExitCode, String> {
    let cfg = build_config(&args.game, args.n, args.linear, &args.target, args.rounds)?;
    let script = load_point(&args.i_script)?;
    let mut ii = build_ii(&args.ii, &cfg)?;
    let transcript = run_game(&cfg, &script, ii.as_mut());
    ctx.emit(&transcript.render())?;
    Ok(ExitCode::SUCCESS)
}
