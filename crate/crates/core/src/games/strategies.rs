//! Player II strategies: copying, witness-driven play, and the tree-game
//! strategies for limit and double-limit targets.

use super::frontend::IiMove;
use crate::machine::{BoxMachine, Step};
use crate::words::{pair, unpair};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A settlement announcement: a claim that the final output value carries
/// `value` at `position`. Only certified data can lose the game against
/// the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub position: u64,
    pub value: u64,
}

#[derive(Clone, Debug)]
pub struct IiAction {
    pub mv: IiMove,
    pub certs: Vec<Certificate>,
}

impl IiAction {
    pub fn pass() -> Self {
        IiAction {
            mv: IiMove::Pass,
            certs: Vec::new(),
        }
    }

    pub fn mv(mv: IiMove) -> Self {
        IiAction {
            mv,
            certs: Vec::new(),
        }
    }
}

/// A deterministic strategy for player II.
pub trait StrategyII: Send {
    fn next(&mut self, i_move: u64) -> IiAction;
}

// ---------------------------------------------------------------------------
// Copying
// ---------------------------------------------------------------------------

struct CopyStrategy {
    certify: bool,
    emitted: u64,
}

impl StrategyII for CopyStrategy {
    fn next(&mut self, i_move: u64) -> IiAction {
        let mut action = IiAction::mv(IiMove::Sym(i_move));
        if self.certify {
            action.certs.push(Certificate {
                position: self.emitted,
                value: i_move,
            });
        }
        self.emitted += 1;
        action
    }
}

/// Copies player I symbol for symbol (the generic game). When `certify`
/// is set the copied symbols are announced as final output data, which is
/// sound exactly for the identity probe/operator pair.
pub fn copy_strategy(certify: bool) -> Box<dyn StrategyII> {
    Box::new(CopyStrategy {
        certify,
        emitted: 0,
    })
}

// ---------------------------------------------------------------------------
// Machine-driven play
// ---------------------------------------------------------------------------

struct MachineStrategy {
    machine: BoxMachine,
    pending: VecDeque<u64>,
    emitted: u64,
    certify: bool,
    rejected: bool,
}

impl StrategyII for MachineStrategy {
    fn next(&mut self, i_move: u64) -> IiAction {
        if !self.rejected {
            match self.machine.feed(i_move) {
                Step::Emit(chunk) => self.pending.extend(chunk),
                Step::Reject => self.rejected = true,
            }
        }
        match self.pending.pop_front() {
            None => IiAction::pass(),
            Some(v) => {
                let mut action = IiAction::mv(IiMove::Sym(v));
                if self.certify {
                    action.certs.push(Certificate {
                        position: self.emitted,
                        value: v,
                    });
                }
                self.emitted += 1;
                action
            }
        }
    }
}

/// Plays the output of a stream machine on I's revealed prefix, one symbol
/// per round, passing while nothing is determined. Emission is
/// irrevocable, so with `certify` set each symbol is announced as final;
/// that is sound when the machine's output is itself the claimed value
/// (identity probe and operator).
pub fn machine_strategy(machine: BoxMachine, certify: bool) -> Box<dyn StrategyII> {
    Box::new(MachineStrategy {
        machine,
        pending: VecDeque::new(),
        emitted: 0,
        certify,
        rejected: false,
    })
}

// ---------------------------------------------------------------------------
// Eraser play from a limit-witness machine
// ---------------------------------------------------------------------------

pub(crate) struct EraserWitnessStrategy {
    machine: BoxMachine,
    y: Vec<u64>,
    tape: Vec<u64>,
    rejected: bool,
}

impl EraserWitnessStrategy {
    pub(crate) fn new(machine: BoxMachine) -> Self {
        EraserWitnessStrategy {
            machine,
            y: Vec::new(),
            tape: Vec::new(),
            rejected: false,
        }
    }

    /// The freshest committed value for each cell: the entry of the highest
    /// fully revealed column.
    fn desired(&self) -> Vec<Option<u64>> {
        let mut out: Vec<Option<u64>> = Vec::new();
        for (i, &v) in self.y.iter().enumerate() {
            let (n, k) = unpair(i as u64);
            let _ = n;
            let k = k as usize;
            if out.len() <= k {
                out.resize(k + 1, None);
            }
            out[k] = Some(v);
        }
        out
    }
}

impl StrategyII for EraserWitnessStrategy {
    fn next(&mut self, i_move: u64) -> IiAction {
        if !self.rejected {
            match self.machine.feed(i_move) {
                Step::Emit(chunk) => self.y.extend(chunk),
                Step::Reject => self.rejected = true,
            }
        }
        let desired = self.desired();
        // First divergence between the tape and the freshest guesses.
        let mut fix_at: Option<usize> = None;
        for (k, &cell) in self.tape.iter().enumerate() {
            if let Some(Some(want)) = desired.get(k) {
                if *want != cell {
                    fix_at = Some(k);
                    break;
                }
            }
        }
        let action = if fix_at.is_some() {
            // Backspace toward the divergent cell, one erase per round.
            IiAction::mv(IiMove::Erase)
        } else {
            match desired.get(self.tape.len()).copied().flatten() {
                Some(v) => IiAction::mv(IiMove::Write(v)),
                None => IiAction::pass(),
            }
        };
        if let IiMove::Erase = action.mv {
            self.tape.pop();
        }
        if let IiMove::Write(v) = action.mv {
            self.tape.push(v);
        }
        action
    }
}

// ---------------------------------------------------------------------------
// Corruption wrapper (for soundness tests)
// ---------------------------------------------------------------------------

struct Corrupted {
    inner: Box<dyn StrategyII>,
    cert: Certificate,
    fired: bool,
}

impl StrategyII for Corrupted {
    fn next(&mut self, i_move: u64) -> IiAction {
        let mut action = self.inner.next(i_move);
        if !self.fired {
            self.fired = true;
            action.certs.push(self.cert);
        }
        action
    }
}

/// Attaches one (presumably wrong) settlement announcement to the first
/// round of an otherwise honest strategy.
pub fn with_corrupted_certificate(
    inner: Box<dyn StrategyII>,
    cert: Certificate,
) -> Box<dyn StrategyII> {
    Box::new(Corrupted {
        inner,
        cert,
        fired: false,
    })
}

// ---------------------------------------------------------------------------
// Tree game, one limit: the guess trie
// ---------------------------------------------------------------------------

/// Plays the tree game for a target of the form `h ∘ lim ∘ k` with
/// symbolwise continuous `h` and `k`: the trie of the mapped column guesses
/// `h((k(x))_n restricted to n)`, each padded with a 0 leaf. Wrong guesses
/// die out finitely, so the final tree is proper and finitely branching
/// with its unique infinite label equal to the target value.
pub fn baire1_strategy(
    k: fn(u64) -> u64,
    h: fn(u64) -> u64,
) -> Box<dyn StrategyII> {
    Box::new(TrieStrategy {
        k,
        h,
        x: Vec::new(),
        words_done: 0,
        inserted: BTreeSet::new(),
        queue: VecDeque::new(),
    })
}

struct TrieStrategy {
    k: fn(u64) -> u64,
    h: fn(u64) -> u64,
    x: Vec<u64>,
    words_done: u64,
    inserted: BTreeSet<Vec<u64>>,
    queue: VecDeque<IiMove>,
}

impl TrieStrategy {
    fn insert_word(&mut self, w: &[u64]) {
        for d in 1..=w.len() {
            let path = w[..d].to_vec();
            if self.inserted.insert(path.clone()) {
                self.queue.push_back(IiMove::Add {
                    label: path[d - 1],
                    path,
                });
            }
        }
    }
}

impl StrategyII for TrieStrategy {
    fn next(&mut self, i_move: u64) -> IiAction {
        self.x.push((self.k)(i_move));
        loop {
            let n = self.words_done;
            let need = if n == 0 { 0 } else { pair(n, n - 1) + 1 };
            if (self.x.len() as u64) < need.max(1) {
                break;
            }
            let mut w: Vec<u64> = (0..n)
                .map(|kk| (self.h)(self.x[pair(n, kk) as usize]))
                .collect();
            w.push(0);
            self.insert_word(&w.clone());
            self.words_done += 1;
        }
        match self.queue.pop_front() {
            Some(mv) => IiAction::mv(mv),
            None => IiAction::pass(),
        }
    }
}

// ---------------------------------------------------------------------------
// Tree game, two limits: scenario trees
// ---------------------------------------------------------------------------

/// One claim about a column of the inner image: either its bit stream has
/// finitely many 1s with final count `c`, or infinitely many.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Claim {
    Fin(u64),
    Inf,
}

impl Claim {
    fn symbol(self) -> u64 {
        match self {
            Claim::Inf => 0,
            Claim::Fin(c) => c + 1,
        }
    }

    fn bit(self) -> u64 {
        match self {
            Claim::Inf => 0,
            Claim::Fin(_) => 1,
        }
    }
}

struct Scenario {
    claims: Vec<Claim>,
    revealed: bool,
    children_spawned: BTreeSet<Claim>,
}

/// Plays the tree game (one derivative) for a target of the form
/// `h ∘ par-isFinite ∘ k` with symbolwise continuous `h` and `k`.
///
/// A scenario claims, per column of the inner image, either a final count
/// of 1s or infinitude. Every claim carries its own evidence stream: an
/// infinitude claim advances with each new 1, a finiteness claim with each
/// observed cell since the count last changed. A node is revealed only
/// when its scenario is unrefuted, its parent is revealed, and the least
/// evidence among its claims has reached its depth; falsely claimed
/// branches therefore stall at bounded depth while truthful chains grow
/// forever, carrying the mapped bit labels.
pub fn baire2_strategy(
    k: fn(u64) -> u64,
    h: fn(u64) -> u64,
    max_columns: usize,
) -> Box<dyn StrategyII> {
    Box::new(ScenarioStrategy {
        k,
        h,
        time: 0,
        counts: BTreeMap::new(),
        confirmations: BTreeMap::new(),
        columns_seen: 0,
        scenarios: BTreeMap::new(),
        root_spawned: BTreeSet::new(),
        queue: VecDeque::new(),
        max_columns,
    })
}

struct ScenarioStrategy {
    k: fn(u64) -> u64,
    h: fn(u64) -> u64,
    time: u64,
    counts: BTreeMap<u64, u64>,
    /// Cells of the column observed since its count last changed.
    confirmations: BTreeMap<u64, u64>,
    columns_seen: u64,
    scenarios: BTreeMap<Vec<u64>, Scenario>,
    root_spawned: BTreeSet<Claim>,
    queue: VecDeque<IiMove>,
    max_columns: usize,
}

impl ScenarioStrategy {
    fn count(&self, col: u64) -> u64 {
        self.counts.get(&col).copied().unwrap_or(0)
    }

    /// How much finite data backs one claim.
    fn evidence(&self, col: u64, claim: Claim) -> u64 {
        match claim {
            Claim::Inf => self.count(col),
            Claim::Fin(c) => {
                if self.count(col) == c {
                    self.confirmations.get(&col).copied().unwrap_or(0)
                } else {
                    0
                }
            }
        }
    }

    fn progress(&self, claims: &[Claim]) -> u64 {
        claims
            .iter()
            .enumerate()
            .map(|(i, &c)| self.evidence(i as u64, c))
            .min()
            .unwrap_or(self.time)
    }

    fn refuted(&self, claims: &[Claim]) -> bool {
        claims.iter().enumerate().any(|(i, c)| match c {
            Claim::Fin(cap) => self.count(i as u64) > *cap,
            Claim::Inf => false,
        })
    }

    /// The claims about a column worth holding now: infinitude, and the
    /// currently attained count as the final one.
    fn candidate_claims(&self, col: u64) -> Vec<Claim> {
        vec![Claim::Inf, Claim::Fin(self.count(col))]
    }

    fn prune_refuted(&mut self) {
        let dead: Vec<Vec<u64>> = self
            .scenarios
            .iter()
            .filter(|(_, sc)| self.refuted(&sc.claims))
            .map(|(k, _)| k.clone())
            .collect();
        for key in dead {
            // Drop the scenario and everything below it; the revealed tree
            // nodes stay (moves are irrevocable) but stop growing.
            let descendants: Vec<Vec<u64>> = self
                .scenarios
                .range(key.clone()..)
                .take_while(|(k, _)| k.starts_with(&key))
                .map(|(k, _)| k.clone())
                .collect();
            for d in descendants {
                self.scenarios.remove(&d);
            }
        }
    }

    fn spawn_and_reveal(&mut self) {
        self.prune_refuted();
        // Root-level scenarios claim column 0.
        if self.columns_seen > 0 {
            for claim in self.candidate_claims(0) {
                if self.root_spawned.insert(claim) {
                    self.scenarios.insert(
                        vec![claim.symbol()],
                        Scenario {
                            claims: vec![claim],
                            revealed: false,
                            children_spawned: BTreeSet::new(),
                        },
                    );
                }
            }
        }
        // Deeper scenarios: each revealed scenario claims its next column,
        // so the claim tree only grows along chains that are still credible.
        let keys: Vec<Vec<u64>> = self.scenarios.keys().cloned().collect();
        for key in &keys {
            let depth = key.len() as u64;
            if depth >= self.columns_seen || depth as usize >= self.max_columns {
                continue;
            }
            match self.scenarios.get(key) {
                Some(sc) if sc.revealed => {}
                _ => continue,
            }
            let claims = self.scenarios[key].claims.clone();
            for claim in self.candidate_claims(depth) {
                let fresh = self
                    .scenarios
                    .get_mut(key)
                    .expect("scenario present")
                    .children_spawned
                    .insert(claim);
                if fresh {
                    let mut path = key.clone();
                    path.push(claim.symbol());
                    let mut child_claims = claims.clone();
                    child_claims.push(claim);
                    self.scenarios.insert(
                        path,
                        Scenario {
                            claims: child_claims,
                            revealed: false,
                            children_spawned: BTreeSet::new(),
                        },
                    );
                }
            }
        }
        // Reveal in key order: parents come before their children.
        let keys: Vec<Vec<u64>> = self.scenarios.keys().cloned().collect();
        for key in keys {
            let sc = &self.scenarios[&key];
            if sc.revealed {
                continue;
            }
            let claims = sc.claims.clone();
            if key.len() > 1 {
                let parent = key[..key.len() - 1].to_vec();
                if !self.scenarios.get(&parent).map(|p| p.revealed).unwrap_or(false) {
                    continue;
                }
            }
            if self.progress(&claims) >= key.len() as u64 {
                let label = (self.h)(claims.last().unwrap().bit());
                self.queue.push_back(IiMove::Add {
                    path: key.clone(),
                    label,
                });
                self.scenarios.get_mut(&key).unwrap().revealed = true;
            }
        }
    }
}

impl StrategyII for ScenarioStrategy {
    fn next(&mut self, i_move: u64) -> IiAction {
        let t = self.time;
        self.time += 1;
        let bit = (self.k)(i_move);
        let (col, _) = unpair(t);
        if col + 1 > self.columns_seen && (col as usize) < self.max_columns {
            self.columns_seen = col + 1;
        }
        if (col as usize) < self.max_columns {
            if bit == 1 {
                *self.counts.entry(col).or_insert(0) += 1;
                self.confirmations.insert(col, 0);
            } else {
                *self.confirmations.entry(col).or_insert(0) += 1;
            }
        }
        self.spawn_and_reveal();
        match self.queue.pop_front() {
            Some(mv) => IiAction::mv(mv),
            None => IiAction::pass(),
        }
    }
}
