//! Conversions between reduction witnesses and game strategies.

use super::frontend::{FrontEndState, IiMove};
use super::strategies::{machine_strategy, EraserWitnessStrategy, IiAction, StrategyII};
use super::{FrontEnd, GameConfig};
use crate::error::GameError;
use crate::machine::{BoxMachine, Machine, Step};
use crate::trees::code_path;
use crate::weihrauch::{ReductionWitness, WitnessForm};
use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

/// A reusable recipe for player II: each call yields a fresh instance.
pub type StrategyBuilder = Arc<dyn Fn() -> Box<dyn StrategyII> + Send + Sync>;

/// Player II from a strong reduction witness to the game's composite: she
/// simulates the witness's pre-processor on I's revealed prefix and plays
/// its output through the front end, certifying only what the front end
/// makes irrevocable output data (the plain Wadge game).
pub fn strategy_from_witness(
    w: &ReductionWitness,
    front_end: FrontEnd,
) -> Result<StrategyBuilder, GameError> {
    if w.form != WitnessForm::Strong {
        return Err(GameError::NonDeterministicStrategy(
            "only strong-form witnesses translate to strategies".into(),
        ));
    }
    let make_pre = move || w.pre_machine();
    let w = w.clone();
    match front_end {
        FrontEnd::Wadge => Ok(Arc::new(move || machine_strategy(w.pre_machine(), true))),
        FrontEnd::Generic => Ok(Arc::new(move || machine_strategy(w.pre_machine(), false))),
        FrontEnd::Eraser => {
            let _ = &make_pre;
            Ok(Arc::new(move || {
                Box::new(EraserWitnessStrategy::new(w.pre_machine()))
            }))
        }
        FrontEnd::Tree { .. } => Ok(Arc::new(move || {
            Box::new(TreeFromCodeStrategy::new(w.pre_machine()))
        })),
        FrontEnd::Backtrack => Err(GameError::IncompatibleFrontEnd(
            "no backtrack translation for witness-driven play".into(),
        )),
    }
}

/// Plays tree moves by decoding the growing code emitted by a machine:
/// whenever a node's whole cell chain becomes visible and nonzero, the
/// node is added to the front-end tree.
struct TreeFromCodeStrategy {
    machine: BoxMachine,
    code: Vec<u64>,
    present: BTreeSet<Vec<u64>>,
    queue: VecDeque<IiMove>,
    scanned: usize,
    rejected: bool,
}

impl TreeFromCodeStrategy {
    fn new(machine: BoxMachine) -> Self {
        TreeFromCodeStrategy {
            machine,
            code: Vec::new(),
            present: BTreeSet::new(),
            queue: VecDeque::new(),
            scanned: 0,
            rejected: false,
        }
    }

    fn scan(&mut self) {
        while self.scanned < self.code.len() {
            let pos = self.scanned as u64;
            let v = self.code[self.scanned];
            self.scanned += 1;
            if v == 0 {
                continue;
            }
            let path = code_path(pos);
            let parent_ok =
                path.len() == 1 || self.present.contains(&path[..path.len() - 1].to_vec());
            if parent_ok && self.present.insert(path.clone()) {
                self.queue.push_back(IiMove::Add {
                    path,
                    label: v - 1,
                });
            }
        }
    }
}

impl StrategyII for TreeFromCodeStrategy {
    fn next(&mut self, i_move: u64) -> IiAction {
        if !self.rejected {
            match self.machine.feed(i_move) {
                Step::Emit(chunk) => self.code.extend(chunk),
                Step::Reject => self.rejected = true,
            }
            self.scan();
        }
        match self.queue.pop_front() {
            Some(mv) => IiAction::mv(mv),
            None => IiAction::pass(),
        }
    }
}

/// Packages a deterministic strategy as a strong witness: the
/// pre-processor replays the strategy against the input stream and emits
/// the front-end-derived code, and the post-processor is the probe's
/// machine form.
pub fn witness_from_strategy(
    builder: StrategyBuilder,
    cfg: &GameConfig,
) -> ReductionWitness {
    let front_end = cfg.front_end;
    let probe_name = cfg.probe.name.clone();
    let make_pre: Arc<dyn Fn() -> BoxMachine + Send + Sync> = Arc::new(move || {
        Box::new(StrategyReplayMachine {
            strategy: builder(),
            fe: FrontEndState::new(front_end),
            emitted: 0,
            round: 0,
            dead: false,
        })
    });
    let make_post: Arc<dyn Fn() -> BoxMachine + Send + Sync> = if probe_name == "indlabel" {
        Arc::new(crate::ops::ind_label_machine)
    } else {
        Arc::new(crate::machine::identity)
    };
    ReductionWitness {
        name: format!("from-strategy({})", cfg.operator.name),
        form: WitnessForm::Strong,
        oracle_name: cfg.operator.name.clone(),
        target_name: cfg.target.name.clone(),
        compare: crate::weihrauch::CompareMode::Prefix,
        make_pre,
        make_post,
        pre_shadow: None,
        post_shadow: None,
    }
}

/// Replays a strategy one round per input symbol, emitting the code the
/// front end derives from its moves.
struct StrategyReplayMachine {
    strategy: Box<dyn StrategyII>,
    fe: FrontEndState,
    emitted: usize,
    round: usize,
    dead: bool,
}

impl Machine for StrategyReplayMachine {
    fn feed(&mut self, symbol: u64) -> Step {
        if self.dead {
            return Step::Reject;
        }
        let action = self.strategy.next(symbol);
        if self.fe.apply(&action.mv, self.round).is_err() {
            self.dead = true;
            return Step::Reject;
        }
        self.round += 1;
        let code = self.fe.emitted_code();
        let fresh: Vec<u64> = code.symbols()[self.emitted..].to_vec();
        self.emitted = code.len();
        Step::Emit(fresh)
    }
}
