//! Stage decoding of code prefixes and the guess operator over stages.

use crate::error::OpError;
use crate::trees::{decode_stage, induced_labels_finite, FiniteTree};
use crate::words::Word;

/// Stage `n` of a code prefix: the total finite tree decoded from the first
/// `n` symbols padded with zeros.
pub fn stage_tree(prefix: &Word, n: u64) -> Result<FiniteTree, OpError> {
    if n as usize > prefix.len() {
        return Err(OpError::InsufficientPrefix {
            stage: n,
            have: prefix.len(),
        });
    }
    let w = Word(prefix.symbols()[..n as usize].to_vec());
    decode_stage(&w).map_err(OpError::Tree)
}

/// New induced labels of `cur` over `prev` of length at least `k`, reduced
/// to their longest common prefix. `None` when nothing new appeared.
fn guess_step(prev: &FiniteTree, cur: &FiniteTree, k: u64) -> Option<Word> {
    let old = induced_labels_finite(prev);
    let mut fresh = induced_labels_finite(cur)
        .into_iter()
        .filter(|w| w.len() as u64 >= k && !old.contains(w));
    let first = fresh.next()?;
    Some(fresh.fold(first, |acc, w| acc.common_prefix(&w)))
}

/// The guess word at stage `n` with threshold `k`: the empty word at stage
/// 0; unchanged when stage `n` adds no induced label of length at least
/// `k`; otherwise the longest common prefix of the stage's new labels.
pub fn guess_word(prefix: &Word, n: u64, k: u64) -> Result<Word, OpError> {
    if n as usize > prefix.len() {
        return Err(OpError::InsufficientPrefix {
            stage: n,
            have: prefix.len(),
        });
    }
    let mut guess = Word::empty();
    let mut prev = stage_tree(prefix, 0)?;
    for j in 1..=n {
        let cur = stage_tree(prefix, j)?;
        if let Some(g) = guess_step(&prev, &cur, k) {
            guess = g;
        }
        prev = cur;
    }
    Ok(guess)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point;
    use crate::trees::{encode_tree_seeded, Edge, RegularTree};

    #[test]
    fn stage_zero_guess_is_empty() {
        let w = Word::from(vec![4, 0, 2]);
        assert_eq!(guess_word(&w, 0, 0).unwrap(), Word::empty());
    }

    #[test]
    fn insufficient_prefix_reported() {
        let w = Word::from(vec![4]);
        assert!(matches!(
            guess_word(&w, 5, 0),
            Err(OpError::InsufficientPrefix { stage: 5, have: 1 })
        ));
    }

    #[test]
    fn linear_tree_guess_converges_to_constant_label() {
        let t = RegularTree::from_parts(
            2,
            Some(0),
            vec![
                Edge { from: 0, label: 7, to: 1 },
                Edge { from: 1, label: 7, to: 1 },
            ],
        )
        .unwrap();
        let p = match encode_tree_seeded(&t, 0).unwrap() {
            Point::TreeCode(rep) => Point::TreeCode(rep),
            _ => unreachable!(),
        };
        let k = 2;
        let prefix = p.prefix(200);
        // Find the first stage revealing a node of depth k + 1; from there
        // the guess must be a prefix of the constant-7 word of length >= k.
        let mut seen = None;
        for n in 1..=200u64 {
            let stage = stage_tree(&prefix, n).unwrap();
            if stage.height() >= k + 1 {
                seen = Some(n);
                break;
            }
        }
        let n0 = seen.expect("depth k+1 node revealed within the prefix");
        let g = guess_word(&prefix, n0, k).unwrap();
        assert!(g.len() as u64 >= k);
        assert!(g.symbols().iter().all(|&s| s == 7));
    }

    #[test]
    fn new_labels_reduce_to_common_prefix() {
        // A stage adding the labels <3,1> and <3,2> with k = 1 yields <3>.
        let prev = FiniteTree::new(vec![(vec![0], 3)]).unwrap();
        let cur = FiniteTree::new(vec![
            (vec![0], 3),
            (vec![0, 0], 1),
            (vec![0, 1], 2),
            (vec![0, 0, 0], 9),
            (vec![0, 1, 0], 9),
        ])
        .unwrap();
        let g = guess_step(&prev, &cur, 1).unwrap();
        assert_eq!(g, Word::from(vec![3]));
    }
}
