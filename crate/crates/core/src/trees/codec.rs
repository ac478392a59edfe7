//! The tree codec: labeled trees as points of Baire space.
//!
//! Every stream position is the label cell of exactly one candidate node
//! path: position `pair(k, 0)` is the cell of root child `k`, and position
//! `pair(k, m + 1)` lies in the code of the slot-`k` subtree at position
//! `m`. A node is present when its cell holds `label + 1`; a cell holding 0
//! kills the node and forces its whole subtree's cells to 0 (the code
//! domain condition). The empty tree is the zero stream.

use super::{FiniteTree, RegularTree};
use crate::error::TreeError;
use crate::point::Point;
use crate::words::{unpair, Word};
use std::collections::{BTreeMap, BTreeSet};

/// A lazily evaluated tree code: the concrete representative is fixed by
/// the source presentation (and seed, for regular sources).
#[derive(Clone, Debug, PartialEq)]
pub struct TreeCodeRep {
    pub(crate) source: TreeSource,
    pub(crate) seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum TreeSource {
    /// Slot-preserving: the unique code of this concrete tree.
    Finite(FiniteTree),
    /// Children of each vertex occupy slots `offset..offset + degree` in
    /// sorted edge order, where `offset = seed % 3`.
    Regular(RegularTree),
}

enum Ctx<'a> {
    Finite(Vec<u64>),
    Regular(usize, &'a RegularTree),
}

impl TreeCodeRep {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn regular_source(&self) -> Option<&RegularTree> {
        match &self.source {
            TreeSource::Regular(t) => Some(t),
            TreeSource::Finite(_) => None,
        }
    }

    pub fn finite_source(&self) -> Option<&FiniteTree> {
        match &self.source {
            TreeSource::Finite(t) => Some(t),
            TreeSource::Regular(_) => None,
        }
    }

    /// The underlying tree as a regular presentation.
    pub fn to_regular(&self) -> RegularTree {
        match &self.source {
            TreeSource::Finite(t) => t.to_regular(),
            TreeSource::Regular(t) => t.clone(),
        }
    }

    fn root_ctx(&self) -> Option<Ctx<'_>> {
        match &self.source {
            TreeSource::Finite(t) => {
                if t.is_empty() {
                    None
                } else {
                    Some(Ctx::Finite(Vec::new()))
                }
            }
            TreeSource::Regular(t) => t.root().map(|r| Ctx::Regular(r, t)),
        }
    }

    fn child<'a>(&'a self, ctx: &Ctx<'a>, slot: u64) -> Option<(u64, Ctx<'a>)> {
        match ctx {
            Ctx::Finite(path) => {
                let t = match &self.source {
                    TreeSource::Finite(t) => t,
                    _ => unreachable!(),
                };
                let mut p = path.clone();
                p.push(slot);
                t.label(&p).map(|l| (l, Ctx::Finite(p)))
            }
            Ctx::Regular(v, t) => {
                let offset = self.seed % 3;
                if slot < offset {
                    return None;
                }
                t.children(*v)
                    .get((slot - offset) as usize)
                    .map(|&(l, to)| (l, Ctx::Regular(to, t)))
            }
        }
    }

    pub fn query(&self, index: u64) -> u64 {
        let mut ctx = match self.root_ctx() {
            None => return 0,
            Some(c) => c,
        };
        let mut i = index;
        loop {
            let (k, m) = unpair(i);
            match self.child(&ctx, k) {
                None => return 0,
                Some((label, c)) => {
                    if m == 0 {
                        return label + 1;
                    }
                    i = m - 1;
                    ctx = c;
                }
            }
        }
    }

    /// For regular sources: the vertex reached by following the slot path
    /// through the representative, or `None` when absent.
    pub fn resolve_regular(&self, path: &[u64]) -> Option<usize> {
        let t = self.regular_source()?;
        let offset = self.seed % 3;
        let mut v = t.root()?;
        for &slot in path {
            if slot < offset {
                return None;
            }
            let &(_, to) = t.children(v).get((slot - offset) as usize)?;
            v = to;
        }
        Some(v)
    }
}

/// Encodes a finite tree as its unique code.
pub fn encode_tree(t: &FiniteTree) -> Point {
    Point::TreeCode(TreeCodeRep {
        source: TreeSource::Finite(t.clone()),
        seed: 0,
    })
}

/// Encodes a regular tree: a concrete representative is fixed by assigning
/// children to consecutive slots (shifted by `seed % 3`) in sorted edge
/// order and unrolling lazily. Rejects the root-only graph, which is not a
/// tree.
pub fn encode_tree_seeded(t: &RegularTree, seed: u64) -> Result<Point, TreeError> {
    if !t.is_empty() && t.edges().is_empty() {
        return Err(TreeError::RootOnly);
    }
    Ok(Point::TreeCode(TreeCodeRep {
        source: TreeSource::Regular(t.clone()),
        seed,
    }))
}

/// Stream position of the label cell of `path` (nonempty). Saturates at
/// `u64::MAX` for cells beyond any reachable prefix.
pub fn label_position(path: &[u64]) -> u64 {
    assert!(!path.is_empty());
    let mut pos = crate::words::pair_saturating(*path.last().unwrap(), 0);
    for &slot in path[..path.len() - 1].iter().rev() {
        pos = crate::words::pair_saturating(slot, pos.saturating_add(1));
    }
    pos
}

/// The node path whose label cell is stream position `i`.
pub fn code_path(i: u64) -> Vec<u64> {
    let mut path = Vec::new();
    let mut cur = i;
    loop {
        let (k, m) = unpair(cur);
        path.push(k);
        if m == 0 {
            return path;
        }
        cur = m - 1;
    }
}

/// What a finite code prefix settles about the coded tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTree {
    /// Nodes whose whole ancestor chain of cells is visible and nonzero.
    pub present: BTreeMap<Vec<u64>, u64>,
    /// Minimal slots with a visible zero cell under a present parent.
    pub absent: BTreeSet<Vec<u64>>,
    /// True once any nonzero cell certifies the tree nonempty.
    pub root_known_nonempty: bool,
    /// Length of the inspected prefix.
    pub horizon: usize,
}

impl PartialTree {
    /// The tree of all present nodes (the decode of `prefix ++ zeros`).
    pub fn to_finite_tree(&self) -> FiniteTree {
        FiniteTree::new(self.present.iter().map(|(p, &l)| (p.clone(), l)))
            .expect("present set is prefix-closed")
    }
}

/// Decodes a code prefix into settled node data, rejecting prefixes that
/// already violate the code domain (a nonzero cell inside a killed column).
pub fn decode_prefix(w: &Word) -> Result<PartialTree, TreeError> {
    let len = w.len() as u64;
    let mut present: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut root_known_nonempty = false;

    for (i, &v) in w.symbols().iter().enumerate() {
        if v == 0 {
            continue;
        }
        root_known_nonempty = true;
        let path = code_path(i as u64);
        for d in 1..path.len() {
            let anc = label_position(&path[..d]);
            debug_assert!(anc < i as u64);
            if w.get(anc as usize) == Some(0) {
                return Err(TreeError::DomainViolation { position: i as u64 });
            }
        }
        present.insert(path, v - 1);
    }

    // Minimal absent slots: visible zero cells directly under the root or a
    // present node.
    let mut absent: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut parents: Vec<Vec<u64>> = vec![Vec::new()];
    parents.extend(present.keys().cloned());
    for parent in parents {
        for slot in 0.. {
            let mut child = parent.clone();
            child.push(slot);
            let pos = label_position(&child);
            if pos >= len {
                // Positions grow with the slot index beyond this point too,
                // except that pair(k, 0) is not monotone across nesting; it
                // is monotone in the slot, so stopping here is safe.
                break;
            }
            if w.get(pos as usize) == Some(0) {
                absent.insert(child);
            }
        }
    }

    Ok(PartialTree {
        present,
        absent,
        root_known_nonempty,
        horizon: w.len(),
    })
}

/// Decodes `prefix ++ zeros` as a total finite tree (stage decoding).
pub fn decode_stage(w: &Word) -> Result<FiniteTree, TreeError> {
    Ok(decode_prefix(w)?.to_finite_tree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::pair;

    fn ft(nodes: &[(&[u64], u64)]) -> FiniteTree {
        FiniteTree::new(nodes.iter().map(|(p, l)| (p.to_vec(), *l))).unwrap()
    }

    #[test]
    fn empty_tree_codes_to_zero() {
        let p = encode_tree(&FiniteTree::empty());
        assert!((0..200).all(|i| p.query(i) == 0));
    }

    #[test]
    fn single_child_code() {
        let p = encode_tree(&ft(&[(&[0], 3)]));
        assert_eq!(p.query(pair(0, 0)), 4);
        for i in 0..500 {
            if i != pair(0, 0) {
                assert_eq!(p.query(i), 0, "position {i}");
            }
        }
    }

    #[test]
    fn slot_one_child_code_differs_but_decodes_bisimilar() {
        let a = ft(&[(&[0], 3)]);
        let b = ft(&[(&[1], 3)]);
        let pa = encode_tree(&a);
        let pb = encode_tree(&b);
        assert_eq!(pb.query(pair(1, 0)), 4);
        assert_ne!(pa.prefix(16), pb.prefix(16));
        let da = decode_prefix(&pa.prefix(64)).unwrap().to_finite_tree();
        let db = decode_prefix(&pb.prefix(64)).unwrap().to_finite_tree();
        use crate::trees::CanonicalForm;
        assert_eq!(
            CanonicalForm::of_finite(&da, 8),
            CanonicalForm::of_finite(&db, 8)
        );
    }

    #[test]
    fn decode_single_symbol() {
        let pt = decode_prefix(&Word::from(vec![4])).unwrap();
        assert_eq!(pt.present.get(&vec![0]), Some(&3));
        assert!(pt.absent.is_empty());
        assert!(pt.root_known_nonempty);
    }

    #[test]
    fn decode_zero_head_marks_absent() {
        let pt = decode_prefix(&Word::from(vec![0])).unwrap();
        assert!(pt.present.is_empty());
        assert!(pt.absent.contains(&vec![0]));
        assert!(!pt.root_known_nonempty);
    }

    #[test]
    fn decode_rejects_domain_violation() {
        // Position 0 is the cell of <0>; position 2 = pair(0, 1) lies in the
        // killed column.
        let err = decode_prefix(&Word::from(vec![0, 0, 5])).unwrap_err();
        assert_eq!(err, TreeError::DomainViolation { position: 2 });
    }

    #[test]
    fn label_position_examples() {
        assert_eq!(label_position(&[0]), 0);
        assert_eq!(label_position(&[1]), 1);
        assert_eq!(label_position(&[0, 0]), pair(0, pair(0, 0) + 1));
        assert_eq!(code_path(label_position(&[2, 1, 0])), vec![2, 1, 0]);
    }

    #[test]
    fn roundtrip_small_tree() {
        let t = ft(&[(&[0], 1), (&[2], 2), (&[0, 1], 3)]);
        let p = encode_tree(&t);
        let need = t
            .nodes()
            .map(|(path, _)| label_position(path))
            .max()
            .unwrap()
            + 1;
        let decoded = decode_prefix(&p.prefix(need as usize)).unwrap().to_finite_tree();
        assert_eq!(decoded, t);
    }

    #[test]
    fn regular_seed_moves_slots() {
        use crate::trees::Edge;
        let t = RegularTree::from_parts(
            2,
            Some(0),
            vec![Edge { from: 0, label: 3, to: 1 }],
        )
        .unwrap();
        let p0 = encode_tree_seeded(&t, 0).unwrap();
        let p1 = encode_tree_seeded(&t, 1).unwrap();
        assert_eq!(p0.query(pair(0, 0)), 4);
        assert_eq!(p1.query(pair(0, 0)), 0);
        assert_eq!(p1.query(pair(1, 0)), 4);
    }

    #[test]
    fn root_only_rejected() {
        let t = RegularTree::from_parts(1, Some(0), vec![]).unwrap();
        assert_eq!(encode_tree_seeded(&t, 0).unwrap_err(), TreeError::RootOnly);
    }
}
