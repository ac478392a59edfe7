//! Move alphabets of the classical front ends and their deterministic
//! encoders into code prefixes.

use super::FrontEnd;
use crate::error::GameError;
use crate::trees::label_position;
use crate::words::{unpair, Word};
use std::collections::BTreeMap;
use std::fmt;

/// One move of player II.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IiMove {
    Pass,
    /// Generic and Wadge games: the next code symbol.
    Sym(u64),
    /// Eraser and backtrack games: append a symbol to the tape/attempt.
    Write(u64),
    /// Eraser game: backspace on the last written cell.
    Erase,
    /// Backtrack game: discard the whole attempt.
    Backtrack,
    /// Tree game: add a labeled node extending the current tree.
    Add { path: Vec<u64>, label: u64 },
}

impl fmt::Display for IiMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IiMove::Pass => write!(f, "pass"),
            IiMove::Sym(n) => write!(f, "{n}"),
            IiMove::Write(n) => write!(f, "w{n}"),
            IiMove::Erase => write!(f, "e"),
            IiMove::Backtrack => write!(f, "bt"),
            IiMove::Add { path, label } => {
                let parts: Vec<String> = path.iter().map(|p| p.to_string()).collect();
                write!(f, "add[{}]={}", parts.join(","), label)
            }
        }
    }
}

/// Per-round cap on derived code emission, so transcripts stay bounded.
const MAX_CODE_PER_ROUND: usize = 4096;

/// The evolving translation of II's moves into a code prefix.
pub struct FrontEndState {
    kind: FrontEnd,
    code: Vec<u64>,
    rounds: usize,
    // eraser
    tape: Vec<u64>,
    snapshots: Vec<Vec<u64>>,
    // backtrack
    attempt: Vec<u64>,
    threshold: u64,
    // tree: player-space nodes and their code slots
    nodes: BTreeMap<Vec<u64>, u64>,
    slot_paths: BTreeMap<Vec<u64>, Vec<u64>>,
    code_nodes: BTreeMap<Vec<u64>, u64>,
    next_root_slot: u64,
    child_next_slot: BTreeMap<Vec<u64>, u64>,
    cursor: u64,
}

impl FrontEndState {
    pub fn new(kind: FrontEnd) -> Self {
        FrontEndState {
            kind,
            code: Vec::new(),
            rounds: 0,
            tape: Vec::new(),
            snapshots: Vec::new(),
            attempt: Vec::new(),
            threshold: 0,
            nodes: BTreeMap::new(),
            slot_paths: BTreeMap::new(),
            code_nodes: BTreeMap::new(),
            next_root_slot: 0,
            child_next_slot: BTreeMap::new(),
            cursor: 0,
        }
    }

    pub fn emitted_code(&self) -> Word {
        Word(self.code.clone())
    }

    /// The current tape of the eraser game.
    pub fn tape(&self) -> &[u64] {
        &self.tape
    }

    /// The maintained finite tree of the tree game (player space).
    pub fn tree_nodes(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.nodes
    }

    /// The decoded code-space tree (matches `emitted_code` by construction).
    pub fn code_nodes(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.code_nodes
    }

    /// Validates and applies one move, then extends the derived code with
    /// every newly settled cell.
    pub fn apply(&mut self, mv: &IiMove, round: usize) -> Result<(), GameError> {
        let bad = |reason: &str| {
            Err(GameError::RuleViolation {
                round,
                reason: reason.to_string(),
            })
        };
        match (self.kind, mv) {
            (_, IiMove::Pass) => {}
            (FrontEnd::Generic | FrontEnd::Wadge, IiMove::Sym(n)) => self.code.push(*n),
            (FrontEnd::Eraser, IiMove::Write(n)) => self.tape.push(*n),
            (FrontEnd::Eraser, IiMove::Erase) => {
                if self.tape.pop().is_none() {
                    return bad("erase on an empty tape");
                }
            }
            (FrontEnd::Backtrack, IiMove::Write(n)) => self.attempt.push(*n),
            (FrontEnd::Backtrack, IiMove::Backtrack) => {
                self.attempt.clear();
                self.threshold = self.rounds as u64 + 1;
            }
            (FrontEnd::Tree { .. }, IiMove::Add { path, label }) => {
                if path.is_empty() {
                    return bad("the root carries no label");
                }
                if self.nodes.contains_key(path) {
                    return bad("node already present; trees only grow");
                }
                if path.len() > 1 && !self.nodes.contains_key(&path[..path.len() - 1]) {
                    return bad("parent missing; the move must extend the tree");
                }
                self.insert_tree_node(path.clone(), *label);
            }
            _ => return bad("move does not belong to this front end's alphabet"),
        }
        self.rounds += 1;
        if let FrontEnd::Eraser = self.kind {
            self.snapshots.push(self.tape.clone());
        }
        self.extend_code();
        Ok(())
    }

    fn insert_tree_node(&mut self, path: Vec<u64>, label: u64) {
        // Allocate a code slot under the parent's code path, skipping slots
        // whose head cell is already emitted (those are dead zeros).
        let parent_code = if path.len() == 1 {
            Vec::new()
        } else {
            self.slot_paths
                .get(&path[..path.len() - 1])
                .expect("parent allocated")
                .clone()
        };
        let counter = if path.len() == 1 {
            &mut self.next_root_slot
        } else {
            self.child_next_slot
                .entry(path[..path.len() - 1].to_vec())
                .or_insert(0)
        };
        let mut slot = *counter;
        loop {
            let mut candidate = parent_code.clone();
            candidate.push(slot);
            if label_position(&candidate) >= self.cursor {
                *counter = slot + 1;
                self.slot_paths.insert(path.clone(), candidate.clone());
                self.code_nodes.insert(candidate, label);
                break;
            }
            slot += 1;
        }
        self.nodes.insert(path, label);
    }

    /// Emits every code cell now settled, in position order.
    fn extend_code(&mut self) {
        for _ in 0..MAX_CODE_PER_ROUND {
            let pos = self.cursor;
            let settled = match self.kind {
                FrontEnd::Generic | FrontEnd::Wadge => {
                    // Code symbols are the moves themselves.
                    if (pos as usize) < self.code.len() {
                        self.cursor += 1;
                        continue;
                    }
                    None
                }
                FrontEnd::Eraser => {
                    let (r, k) = unpair(pos);
                    if (r as usize) < self.snapshots.len() {
                        Some(
                            self.snapshots[r as usize]
                                .get(k as usize)
                                .copied()
                                .unwrap_or(0),
                        )
                    } else {
                        None
                    }
                }
                FrontEnd::Backtrack => {
                    let (m, k) = unpair(pos);
                    if m < self.threshold {
                        Some(0)
                    } else {
                        self.attempt.get(k as usize).copied()
                    }
                }
                FrontEnd::Tree { .. } => {
                    // One cell per round: the next position is settled as a
                    // node cell or killed.
                    if (self.code.len() as u64) < self.rounds as u64 {
                        let path = crate::trees::code_path(pos);
                        Some(self.code_nodes.get(&path).map(|&l| l + 1).unwrap_or(0))
                    } else {
                        None
                    }
                }
            };
            match settled {
                Some(v) => {
                    self.code.push(v);
                    self.cursor += 1;
                }
                None => break,
            }
        }
    }
}

/// Replays a move list through a fresh front end, returning the code
/// prefix and the first rule violation, if any.
pub fn translate_moves(kind: FrontEnd, moves: &[IiMove]) -> (Word, Option<GameError>) {
    let mut st = FrontEndState::new(kind);
    for (round, mv) in moves.iter().enumerate() {
        if let Err(e) = st.apply(mv, round) {
            return (st.emitted_code(), Some(e));
        }
    }
    (st.emitted_code(), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops;
    use crate::point::Point;
    use crate::words::pair;

    #[test]
    fn eraser_snapshots_encode_tape_history() {
        let moves = vec![
            IiMove::Write(1),
            IiMove::Write(2),
            IiMove::Erase,
            IiMove::Write(3),
        ];
        let (code, err) = translate_moves(FrontEnd::Eraser, &moves);
        assert!(err.is_none());
        // Snapshots: (1), (1,2), (1), (1,3); column r is snapshot r.
        let expect = [vec![1], vec![1, 2], vec![1], vec![1, 3]];
        for (r, snap) in expect.iter().enumerate() {
            for (k, &v) in snap.iter().enumerate() {
                let pos = pair(r as u64, k as u64);
                if (pos as usize) < code.len() {
                    assert_eq!(code.get(pos as usize), Some(v), "snapshot {r} cell {k}");
                }
            }
        }
        // The final tape is recovered by the pointwise column limits: build
        // the full point by extending with the final snapshot forever.
        let cols: Vec<Point> = expect
            .iter()
            .map(|s| Point::literal(s.clone(), 0))
            .collect();
        let p = Point::columns(cols, Point::literal(vec![1, 3], 0));
        let l = ops::lim_eval(&p).unwrap();
        assert_eq!(l.query(0), 1);
        assert_eq!(l.query(1), 3);
    }

    #[test]
    fn eraser_rejects_erase_on_empty_tape() {
        let (_, err) = translate_moves(FrontEnd::Eraser, &[IiMove::Erase]);
        assert!(matches!(err, Some(GameError::RuleViolation { round: 0, .. })));
    }

    #[test]
    fn backtrack_threshold_jumps() {
        let moves = vec![
            IiMove::Write(1),
            IiMove::Backtrack,
            IiMove::Write(2),
            IiMove::Write(2),
            IiMove::Write(2),
            IiMove::Write(2),
        ];
        let (code, err) = translate_moves(FrontEnd::Backtrack, &moves);
        assert!(err.is_none());
        // Columns with index >= 2 carry the attempt (2, 2, ...).
        for m in 2..5u64 {
            for k in 0..3u64 {
                let pos = pair(m, k);
                if (pos as usize) < code.len() {
                    assert_eq!(code.get(pos as usize), Some(2), "col {m} cell {k}");
                }
            }
        }
        // Cells of below-threshold columns settled after the backtrack are
        // zero; cells emitted before it keep their old values irrevocably,
        // which leaves only finitely many junk columns.
        for k in 1..4u64 {
            let pos = pair(0, k);
            if (pos as usize) < code.len() {
                assert_eq!(code.get(pos as usize), Some(0), "cell (0,{k})");
            }
        }
    }

    #[test]
    fn tree_moves_roundtrip_through_decode() {
        let moves = vec![
            IiMove::Add { path: vec![0], label: 3 },
            IiMove::Add { path: vec![0, 0], label: 7 },
            IiMove::Pass,
            IiMove::Pass,
            IiMove::Pass,
            IiMove::Pass,
            IiMove::Pass,
            IiMove::Pass,
            IiMove::Pass,
            IiMove::Pass,
        ];
        let (code, err) = translate_moves(
            FrontEnd::Tree { derivative_depth: 0, linear: true },
            &moves,
        );
        assert!(err.is_none());
        let pt = crate::trees::decode_prefix(&code).unwrap();
        // The decoded partial tree shows a child labeled 3 with a child
        // labeled 7.
        let found: Vec<(&Vec<u64>, u64)> = pt.present.iter().map(|(p, &l)| (p, l)).collect();
        assert!(found.iter().any(|(p, l)| p.len() == 1 && *l == 3));
        assert!(found.iter().any(|(p, l)| p.len() == 2 && *l == 7));
    }

    #[test]
    fn tree_rejects_non_extending_move() {
        let moves = vec![IiMove::Add { path: vec![0, 0], label: 1 }];
        let (_, err) = translate_moves(
            FrontEnd::Tree { derivative_depth: 1, linear: false },
            &moves,
        );
        assert!(matches!(err, Some(GameError::RuleViolation { .. })));
    }

    #[test]
    fn wrong_alphabet_is_a_violation() {
        let (_, err) = translate_moves(FrontEnd::Wadge, &[IiMove::Write(1)]);
        assert!(err.is_some());
    }

}
