//! The generalized Wadge game: an arbiter over probe/operator pairs, the
//! classical front ends, and conversions between strategies and reduction
//! witnesses.
//!
//! Player I builds a point symbol by symbol; player II answers with moves
//! of the front end's alphabet (or passes), which the front end translates
//! into a code prefix. The winning condition is a limit property, so a
//! finite run ends in a three-valued verdict: a concrete finite violation
//! loses, a violation-free live run is consistent with winning, and
//! anything else is undetermined.

mod arbiter;
mod convert;
mod frontend;
mod strategies;

pub use arbiter::{game_value_prefix, run_game, Diagnostics, RoundRecord, Transcript, Verdict};
pub use convert::{strategy_from_witness, witness_from_strategy, StrategyBuilder};
pub use frontend::{translate_moves, FrontEndState, IiMove};
pub use strategies::{
    baire1_strategy, baire2_strategy, copy_strategy, machine_strategy, with_corrupted_certificate,
    Certificate, IiAction, StrategyII,
};

use crate::error::GameError;
use crate::ops;
use crate::point::Point;
use crate::weihrauch::{oracle, value_map_point, OracleSpec};
use std::sync::Arc;

/// Which classical game is being played; the generic form takes the
/// probe/operator pair explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontEnd {
    Generic,
    Wadge,
    Eraser,
    Backtrack,
    Tree { derivative_depth: u32, linear: bool },
}

/// The output reader of a game: a deterministic tightening of a probe.
#[derive(Clone)]
pub struct ProbeSpec {
    pub name: String,
    pub exact: OracleSpec,
}

impl ProbeSpec {
    pub fn id() -> Self {
        ProbeSpec {
            name: "id".into(),
            exact: oracle("id").expect("id oracle"),
        }
    }

    pub fn ind_label() -> Self {
        ProbeSpec {
            name: "indlabel".into(),
            exact: oracle("indlabel").expect("indlabel oracle"),
        }
    }
}

/// A configured game instance.
#[derive(Clone)]
pub struct GameConfig {
    pub front_end: FrontEnd,
    pub probe: ProbeSpec,
    pub operator: OracleSpec,
    pub target: OracleSpec,
    pub round_budget: usize,
}

/// The operator of the tree game: the derivative iterated `n` times,
/// optionally followed by linearization.
pub fn tree_operator(derivative_depth: u32, linear: bool) -> OracleSpec {
    let td = oracle("td").expect("td oracle");
    let lin = oracle("linearize").expect("linearize oracle");
    OracleSpec {
        name: if linear {
            format!("linearize∘td^{derivative_depth}")
        } else {
            format!("td^{derivative_depth}")
        },
        eval: Arc::new(move |p| {
            let mut cur = p.clone();
            for _ in 0..derivative_depth {
                cur = td.evaluate(&cur)?;
            }
            if linear {
                cur = lin.evaluate(&cur)?;
            }
            Ok(cur)
        }),
    }
}

impl GameConfig {
    /// The probe/operator pair fixed by a classical front end.
    pub fn classic(
        front_end: FrontEnd,
        target: OracleSpec,
        round_budget: usize,
    ) -> Result<GameConfig, GameError> {
        if round_budget == 0 {
            return Err(GameError::IncompatibleFrontEnd(
                "round budget must be at least 1".into(),
            ));
        }
        let (probe, operator) = match front_end {
            FrontEnd::Wadge => (ProbeSpec::id(), oracle("id").unwrap()),
            FrontEnd::Eraser => (ProbeSpec::id(), oracle("lim").unwrap()),
            FrontEnd::Backtrack => (ProbeSpec::id(), oracle("limdelta").unwrap()),
            FrontEnd::Tree {
                derivative_depth,
                linear,
            } => (ProbeSpec::ind_label(), tree_operator(derivative_depth, linear)),
            FrontEnd::Generic => {
                return Err(GameError::IncompatibleFrontEnd(
                    "the generic front end takes an explicit probe/operator pair".into(),
                ))
            }
        };
        Ok(GameConfig {
            front_end,
            probe,
            operator,
            target,
            round_budget,
        })
    }

    /// A generic game over an explicit probe/operator pair.
    pub fn generic(
        probe: ProbeSpec,
        operator: OracleSpec,
        target: OracleSpec,
        round_budget: usize,
    ) -> Result<GameConfig, GameError> {
        if round_budget == 0 {
            return Err(GameError::IncompatibleFrontEnd(
                "round budget must be at least 1".into(),
            ));
        }
        Ok(GameConfig {
            front_end: FrontEnd::Generic,
            probe,
            operator,
            target,
            round_budget,
        })
    }

    /// The composite the game evaluates on II's output.
    pub fn game_value(&self, y: &Point) -> Result<Point, crate::error::WitnessError> {
        let t = self.operator.evaluate(y)?;
        self.probe.exact.evaluate(&t)
    }

    /// The target whose value is the game composite itself (the copy
    /// strategy wins this one).
    pub fn zt_target(&self) -> OracleSpec {
        let operator = self.operator.clone();
        let probe = self.probe.exact.clone();
        OracleSpec {
            name: format!("{}∘{}", self.probe.name, self.operator.name),
            eval: Arc::new(move |p| {
                let t = operator.evaluate(p)?;
                probe.evaluate(&t)
            }),
        }
    }

    /// Does II's derived output live in the tree-code domain?
    pub fn output_is_tree_code(&self) -> bool {
        matches!(self.front_end, FrontEnd::Tree { .. })
            || self.operator.name.contains("td")
            || self.operator.name.contains("linearize")
    }
}

/// Named targets for the command-line surface and the acceptance suite.
pub fn target(name: &str) -> Option<OracleSpec> {
    match name {
        "id" | "lim" | "limdelta" | "isfinite" => oracle(name),
        // One Baire-class-1 sample target: successor after the limit.
        "baire1" => Some(OracleSpec {
            name: "baire1".into(),
            eval: Arc::new(|p| {
                let l = ops::lim_eval(p).map_err(crate::error::WitnessError::Op)?;
                Ok(value_map_point(&l, &(Arc::new(|v: u64| v + 1) as _)))
            }),
        }),
        // One Baire-class-2 sample target: successor after the parallel
        // finiteness test of the parity image.
        "baire2" => Some(OracleSpec {
            name: "baire2".into(),
            eval: Arc::new(|p| {
                let parity = value_map_point(p, &(Arc::new(|v: u64| v % 2) as _));
                let bits = ops::parallel_apply(ops::ColumnOp::IsFinite, &parity)
                    .map_err(crate::error::WitnessError::Op)?;
                Ok(value_map_point(&bits, &(Arc::new(|v: u64| v + 1) as _)))
            }),
        }),
        _ => None,
    }
}
