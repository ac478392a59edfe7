use super::{load_point, Ctx};
use clap::Args;
use std::io::BufRead;
use std::path::PathBuf;
use std::process::ExitCode;
use wadge_core::games::{run_game, FrontEndState, IiAction, IiMove, StrategyII};
use wadge_core::point::Point;

#[derive(Args)]
pub struct PlayArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long)]
    linear: bool,
    #[arg(long, default_value = "zt")]
    target: String,
    #[arg(long, default_value_t = 20)]
    rounds: usize,
    /// Player I's script; without it, player I reads from standard input
    /// too (prefix each round with I's number).
    #[arg(long)]
    i_script: Option<PathBuf>,
    /// Opponent for the scripted side when the human plays I.
    #[arg(long, default_value = "copy")]
    ii: String,
    /// Which side the human plays.
    #[arg(long, default_value = "II")]
    human: String,
}

fn parse_move(line: &str) -> Result<IiMove, String> {
    let line = line.trim();
    if line == "pass" {
        return Ok(IiMove::Pass);
    }
    if line == "e" {
        return Ok(IiMove::Erase);
    }
    if line == "bt" {
        return Ok(IiMove::Backtrack);
    }
    if let Some(rest) = line.strip_prefix('w') {
        let n: u64 = rest.trim().parse().map_err(|_| "usage: w <number>")?;
        return Ok(IiMove::Write(n));
    }
    if let Some(rest) = line.strip_prefix("add") {
        let mut parts = rest.trim().split_whitespace();
        let path_text = parts.next().ok_or("usage: add <path> <label>")?;
        let label: u64 = parts
            .next()
            .ok_or("usage: add <path> <label>")?
            .parse()
            .map_err(|_| "label must be a number")?;
        let path: Vec<u64> = path_text
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| "path must be numbers"))
            .collect::<Result<_, _>>()?;
        return Ok(IiMove::Add { path, label });
    }
    line.parse::<u64>()
        .map(IiMove::Sym)
        .map_err(|_| "moves: <n> | pass | w <n> | e | bt | add <path> <label> | q".to_string())
}

fn show_state(fe: &FrontEndState, cfg_game: &str) {
    match cfg_game {
        "eraser" | "backtrack" => println!("  tape: {:?}", fe.tape()),
        "tree" => {
            let nodes = fe.tree_nodes();
            if nodes.is_empty() {
                println!("  tree: (root only)");
            } else {
                for (path, label) in nodes {
                    println!("  node {path:?} label {label}");
                }
            }
        }
        _ => println!("  output so far: {:?}", fe.emitted_code()),
    }
}

/// Replays recorded actions, for judging the session with the arbiter.
struct Replay {
    actions: Vec<IiAction>,
    at: usize,
}

impl StrategyII for Replay {
    fn next(&mut self, _i: u64) -> IiAction {
        let a = self
            .actions
            .get(self.at)
            .cloned()
            .unwrap_or_else(IiAction::pass);
        self.at += 1;
        a
    }
}

pub fn run(ctx: &Ctx, args: PlayArgs) -> Result<ExitCode, String> {
    if args.human != "II" && args.human != "I" {
        return Err("--human must be I or II".into());
    }
    let cfg = super::run::build_config(&args.game, args.n, args.linear, &args.target, args.rounds)?;
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();

    let script: Option<Point> = match &args.i_script {
        Some(p) => Some(load_point(p)?),
        None => None,
    };

    let mut fe = FrontEndState::new(cfg.front_end);
    let mut i_moves: Vec<u64> = Vec::new();
    let mut actions: Vec<IiAction> = Vec::new();
    let mut ii_machine = if args.human == "I" {
        Some(super::run::build_ii(&args.ii, &cfg)?)
    } else {
        None
    };

    'rounds: for round in 0..args.rounds {
        // Player I moves strictly first.
        let i_move = match (&script, args.human.as_str()) {
            (Some(s), _) => s.query(round as u64),
            (None, "I") => loop {
                println!("round {round}: your move as I (a number, or q):");
                match lines.next() {
                    None => break 'rounds,
                    Some(line) => {
                        let line = line.map_err(|e| e.to_string())?;
                        if line.trim() == "q" {
                            break 'rounds;
                        }
                        match line.trim().parse::<u64>() {
                            Ok(n) => break n,
                            Err(_) => println!("  a move for I is a number"),
                        }
                    }
                }
            },
            (None, _) => {
                return Err("playing II needs --i-script".into());
            }
        };
        i_moves.push(i_move);
        println!("round {round}: I plays {i_move}");

        match &mut ii_machine {
            Some(m) => {
                let action = m.next(i_move);
                match fe.apply(&action.mv, round) {
                    Ok(()) => {
                        println!("  II plays {}", action.mv);
                        actions.push(action);
                    }
                    Err(e) => {
                        // A machine forfeits the round on a refused move.
                        println!("  move refused: {e}");
                        actions.push(IiAction::pass());
                    }
                }
            }
            None => loop {
                println!("  your move as II:");
                match lines.next() {
                    None => {
                        fe.apply(&IiMove::Pass, round).expect("pass is always legal");
                        actions.push(IiAction::pass());
                        break;
                    }
                    Some(line) => {
                        let line = line.map_err(|e| e.to_string())?;
                        if line.trim() == "q" {
                            break 'rounds;
                        }
                        match parse_move(&line) {
                            Err(e) => println!("  move refused: {e}"),
                            Ok(mv) => match fe.apply(&mv, round) {
                                Err(e) => println!("  move refused: {e}"),
                                Ok(()) => {
                                    println!("  II plays {mv}");
                                    actions.push(IiAction::mv(mv));
                                    break;
                                }
                            },
                        }
                    }
                }
            },
        }
        show_state(&fe, &args.game);
    }

    // Judge the session by replaying it through the arbiter.
    let script_point = match script {
        Some(s) => s,
        None => Point::literal(i_moves.clone(), 0),
    };
    let budget = actions.len().max(1);
    let mut replay = Replay {
        actions,
        at: 0,
    };
    let mut judged = cfg.clone();
    judged.round_budget = budget;
    let transcript = run_game(&judged, &script_point, &mut replay);
    ctx.emit(&transcript.render())?;
    Ok(ExitCode::SUCCESS)
}
