//! Finite words over the naturals, the pairing bijection, and the
//! refinement relation on equal-length words.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A finite word over the naturals. Symbols carry no sentinel values;
/// the length is explicit.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u64>);

impl Word {
    pub fn new(symbols: Vec<u64>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn symbols(&self) -> &[u64] {
        &self.0
    }

    pub fn push(&mut self, sym: u64) {
        self.0.push(sym);
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len() <= other.len() && self.0[..] == other.0[..self.len()]
    }

    /// Longest common prefix of two words.
    pub fn common_prefix(&self, other: &Word) -> Word {
        let n = self
            .0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count();
        Word(self.0[..n].to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u64>> for Word {
    fn from(v: Vec<u64>) -> Self {
        Word(v)
    }
}

impl From<&[u64]> for Word {
    fn from(v: &[u64]) -> Self {
        Word(v.to_vec())
    }
}

/// Cantor pairing: `pair(n, k) = (n + k)(n + k + 1)/2 + k`.
///
/// Bijective from pairs of naturals onto the naturals; enumerates the grid
/// by antidiagonals with `k` ascending along each diagonal.
pub fn pair(n: u64, k: u64) -> u64 {
    let s = n as u128 + k as u128;
    let v = s * (s + 1) / 2 + k as u128;
    u64::try_from(v).expect("pairing index overflows u64")
}

/// Like [`pair`] but clamping at `u64::MAX`. Nested code cell positions
/// outgrow any finite prefix within a few levels; a clamped position is
/// simply one that no run can ever reach.
pub fn pair_saturating(n: u64, k: u64) -> u64 {
    let s = n as u128 + k as u128;
    if s >= 1 << 34 {
        return u64::MAX;
    }
    let v = s * (s + 1) / 2 + k as u128;
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Inverse of [`pair`]: `unpair(pair(n, k)) == (n, k)`.
pub fn unpair(m: u64) -> (u64, u64) {
    let m128 = m as u128;
    let w = ((8 * m128 + 1).isqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let k = m128 - t;
    let n = w - k;
    (n as u64, k as u64)
}

/// The refinement relation on equal-length words: `s ⊑ t` iff the words have
/// the same length and every nonzero position of `s` agrees with `t`.
pub fn refines(s: &Word, t: &Word) -> bool {
    s.len() == t.len()
        && s.0
            .iter()
            .zip(t.0.iter())
            .all(|(&a, &b)| a == 0 || a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: index of (n, k) in the antidiagonal enumeration
    /// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
    fn diagonal_index(n: u64, k: u64) -> u64 {
        let mut idx = 0u64;
        for d in 0.. {
            for kk in 0..=d {
                let nn = d - kk;
                if (nn, kk) == (n, k) {
                    return idx;
                }
                idx += 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn pair_base_case() {
        assert_eq!(pair(0, 0), 0);
    }

    #[test]
    fn pair_matches_diagonal_enumeration() {
        // Frozen from the oracle: pair(0,2) = 5.
        assert_eq!(diagonal_index(0, 2), 5);
        assert_eq!(pair(0, 2), 5);
        assert_eq!(unpair(5), (0, 2));
        for n in 0..12 {
            for k in 0..12 {
                assert_eq!(pair(n, k), diagonal_index(n, k), "at ({n},{k})");
            }
        }
    }

    #[test]
    fn unpair_inverts_pair() {
        assert_eq!(unpair(pair(7, 11)), (7, 11));
    }

    #[test]
    fn pair_bijective_on_grid() {
        let mut seen = std::collections::BTreeSet::new();
        for n in 0..=200u64 {
            for k in 0..=200u64 {
                let m = pair(n, k);
                assert!(seen.insert(m), "collision at ({n},{k})");
                assert_eq!(unpair(m), (n, k));
            }
        }
    }

    #[test]
    fn refines_examples() {
        assert!(refines(&Word::from(vec![0, 2, 0]), &Word::from(vec![1, 2, 3])));
        assert!(!refines(&Word::from(vec![2, 0]), &Word::from(vec![1, 0])));
    }

    proptest! {
        #[test]
        fn refines_reflexive(w in proptest::collection::vec(0u64..9, 0..30)) {
            let w = Word::from(w);
            prop_assert!(refines(&w, &w));
        }

        #[test]
        fn unpair_pair_roundtrip(n in 0u64..100_000, k in 0u64..100_000) {
            prop_assert_eq!(unpair(pair(n, k)), (n, k));
        }
    }
}
