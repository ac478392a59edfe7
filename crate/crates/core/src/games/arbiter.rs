//! The game arbiter: runs scripted rounds and computes the finite-horizon
//! verdict.

use super::frontend::{FrontEndState, IiMove};
use super::strategies::{Certificate, StrategyII};
use super::{FrontEnd, GameConfig};
use crate::point::Point;
use crate::trees::decode_prefix;
use crate::weihrauch::DomainStatus;
use crate::words::Word;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No finite violation, player II stayed live, and every settled claim
    /// matches the target value.
    WinConsistent,
    /// A concrete finite witness against player II.
    LossWitnessed { reason: String },
    /// Nothing decides the run either way at this horizon.
    Undetermined { reason: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::WinConsistent => write!(f, "WIN_CONSISTENT"),
            Verdict::LossWitnessed { reason } => write!(f, "LOSS_WITNESSED ({reason})"),
            Verdict::Undetermined { reason } => write!(f, "UNDETERMINED ({reason})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RoundRecord {
    pub i: u64,
    pub ii: IiMove,
    pub certs: Vec<Certificate>,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub pass_count: usize,
    pub first_violation: Option<String>,
    pub certs_checked: usize,
    pub certs_mismatched: usize,
    /// Eraser: cells untouched over the second half of the run that agree
    /// with the target value, out of those checked.
    pub stable_cells_matching: usize,
    pub stable_cells_checked: usize,
    pub decoded_nodes: usize,
}

#[derive(Clone, Debug)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
    pub x_prefix: Word,
    pub y_prefix: Word,
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

impl Transcript {
    /// Line-oriented form: one round per line plus a verdict block.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(&format!("I:{} II:{}\n", r.i, r.ii));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str(&format!(
            "passes: {}/{}\n",
            self.diagnostics.pass_count,
            self.rounds.len()
        ));
        out.push_str(&format!(
            "first-violation: {}\n",
            self.diagnostics
                .first_violation
                .clone()
                .unwrap_or_else(|| "none".into())
        ));
        out.push_str(&format!(
            "certs: {} checked, {} mismatched\n",
            self.diagnostics.certs_checked, self.diagnostics.certs_mismatched
        ));
        if self.diagnostics.stable_cells_checked > 0 {
            out.push_str(&format!(
                "stable-cells: {}/{} match the target\n",
                self.diagnostics.stable_cells_matching, self.diagnostics.stable_cells_checked
            ));
        }
        out
    }
}

/// Runs the game for the configured budget with a scripted player I and a
/// deterministic player II, then judges the finite run.
///
/// Player I moves strictly first each round, reading her symbols off the
/// scripted point. The verdict is three-valued: a rule violation, a code
/// domain violation, or a settled claim contradicting the target loses; a
/// violation-free run in which II keeps playing symbols is consistent with
/// a win; a run with a silent tail stays undetermined. When the script
/// falls outside the target's certified domain player II wins by default.
pub fn run_game(cfg: &GameConfig, script: &Point, ii: &mut dyn StrategyII) -> Transcript {
    let mut fe = FrontEndState::new(cfg.front_end);
    let mut rounds = Vec::new();
    let mut diagnostics = Diagnostics::default();
    let mut violation: Option<String> = None;
    let mut certs: BTreeMap<u64, u64> = BTreeMap::new();
    let mut tape_history: Vec<Vec<u64>> = Vec::new();

    for round in 0..cfg.round_budget {
        let i_move = script.query(round as u64);
        let action = ii.next(i_move);
        if let IiMove::Pass = action.mv {
            diagnostics.pass_count += 1;
        }
        let apply = fe.apply(&action.mv, round);
        rounds.push(RoundRecord {
            i: i_move,
            ii: action.mv.clone(),
            certs: action.certs.clone(),
        });
        for c in &action.certs {
            if let Some(&prev) = certs.get(&c.position) {
                if prev != c.value && violation.is_none() {
                    violation = Some(format!(
                        "conflicting settlements at output position {}",
                        c.position
                    ));
                }
            }
            certs.insert(c.position, c.value);
        }
        if let Err(e) = apply {
            violation = Some(e.to_string());
            break;
        }
        if matches!(cfg.front_end, FrontEnd::Eraser) {
            tape_history.push(fe.tape().to_vec());
        }
    }

    let x_prefix = script.prefix(rounds.len());
    let y_prefix = fe.emitted_code();

    // Win by default when the script is certified outside the target.
    if cfg.target.certify(script) == DomainStatus::Out {
        return Transcript {
            rounds,
            x_prefix,
            y_prefix,
            verdict: Verdict::WinConsistent,
            diagnostics: Diagnostics {
                first_violation: Some("none (script outside the target domain)".into()),
                ..diagnostics
            },
        };
    }
    let target_value = cfg
        .target
        .evaluate(script)
        .expect("certified in-domain script evaluates");

    // Code domain violation for tree-valued operators.
    if violation.is_none() && cfg.output_is_tree_code() {
        match decode_prefix(&y_prefix) {
            Err(e) => violation = Some(e.to_string()),
            Ok(pt) => diagnostics.decoded_nodes = pt.present.len(),
        }
    }

    // Settled claims against the exact target value.
    if violation.is_none() {
        for (&pos, &val) in &certs {
            diagnostics.certs_checked += 1;
            if target_value.query(pos) != val {
                diagnostics.certs_mismatched += 1;
                if violation.is_none() {
                    violation = Some(format!(
                        "settled output position {pos} is {val}, target has {}",
                        target_value.query(pos)
                    ));
                }
            }
        }
    }

    // Eraser diagnostic: cells stable over the second half of the run.
    if matches!(cfg.front_end, FrontEnd::Eraser) && !tape_history.is_empty() {
        let half = tape_history.len() / 2;
        let last = tape_history.last().unwrap();
        for (k, &v) in last.iter().enumerate() {
            let stable = tape_history[half..]
                .iter()
                .all(|t| t.get(k).copied() == Some(v));
            if stable {
                diagnostics.stable_cells_checked += 1;
                if target_value.query(k as u64) == v {
                    diagnostics.stable_cells_matching += 1;
                }
            }
        }
    }

    let verdict = match violation {
        Some(reason) => {
            diagnostics.first_violation = Some(reason.clone());
            Verdict::LossWitnessed { reason }
        }
        None => {
            let half_start = cfg.round_budget / 2;
            let live_late = rounds
                .iter()
                .skip(half_start)
                .any(|r| !matches!(r.ii, IiMove::Pass));
            let live_ever = rounds.iter().any(|r| !matches!(r.ii, IiMove::Pass));
            if live_ever && live_late {
                Verdict::WinConsistent
            } else {
                Verdict::Undetermined {
                    reason: "player II went silent".into(),
                }
            }
        }
    };

    Transcript {
        rounds,
        x_prefix,
        y_prefix,
        verdict,
        diagnostics,
    }
}

/// A position-by-position check that a transcript's derived code stays
/// pointwise consistent with the target on the probe/operator composite;
/// exposed for tests that want more than the verdict.
pub fn game_value_prefix(
    cfg: &GameConfig,
    y: &Point,
    depth: usize,
) -> Result<Word, crate::error::WitnessError> {
    cfg.game_value(y).map(|v| v.prefix(depth))
}
