//! Bisimilarity of labeled trees: depth-bounded canonical forms and exact
//! partition refinement on regular presentations.

use super::{FiniteTree, RegularTree};
use std::collections::BTreeMap;

/// Depth-`d` normalized form of a tree: children as sorted, deduplicated
/// `(label, canonical subtree)` pairs. Two trees have equal depth-`d`
/// canonical forms iff they are bisimilar to depth `d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CanonicalForm {
    Empty,
    Node(Vec<(u64, CanonicalForm)>),
}

impl CanonicalForm {
    pub fn of_finite(t: &FiniteTree, depth: u64) -> CanonicalForm {
        if t.is_empty() {
            return CanonicalForm::Empty;
        }
        fn go(t: &FiniteTree, path: &[u64], depth: u64) -> CanonicalForm {
            if depth == 0 {
                return CanonicalForm::Node(Vec::new());
            }
            let mut children: Vec<(u64, CanonicalForm)> = t
                .child_slots(path)
                .into_iter()
                .map(|slot| {
                    let mut p = path.to_vec();
                    p.push(slot);
                    let label = t.label(&p).expect("child exists");
                    (label, go(t, &p, depth - 1))
                })
                .collect();
            children.sort();
            children.dedup();
            CanonicalForm::Node(children)
        }
        go(t, &[], depth)
    }

    pub fn of_regular(t: &RegularTree, depth: u64) -> CanonicalForm {
        let root = match t.root() {
            None => return CanonicalForm::Empty,
            Some(r) => r,
        };
        fn go(
            t: &RegularTree,
            v: usize,
            depth: u64,
            memo: &mut BTreeMap<(usize, u64), CanonicalForm>,
        ) -> CanonicalForm {
            if depth == 0 {
                return CanonicalForm::Node(Vec::new());
            }
            if let Some(c) = memo.get(&(v, depth)) {
                return c.clone();
            }
            let mut children: Vec<(u64, CanonicalForm)> = t
                .children(v)
                .iter()
                .map(|&(label, to)| (label, go(t, to, depth - 1, memo)))
                .collect();
            children.sort();
            children.dedup();
            let c = CanonicalForm::Node(children);
            memo.insert((v, depth), c.clone());
            c
        }
        go(t, root, depth, &mut BTreeMap::new())
    }
}

/// Convenience wrapper over the canonical form of either presentation.
pub fn canonical_form(t: &RegularTree, depth: u64) -> CanonicalForm {
    CanonicalForm::of_regular(t, depth)
}

/// Bisimilarity mode: compare to a fixed depth, or exactly (regular trees).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisimDepth {
    Depth(u64),
    Exact,
}

/// Exact bisimilarity of the unfoldings of two regular trees, by partition
/// refinement on the disjoint union. Two empty trees are bisimilar.
pub fn bisimilar_exact(a: &RegularTree, b: &RegularTree) -> bool {
    match (a.root(), b.root()) {
        (None, None) => return true,
        (Some(_), Some(_)) => {}
        _ => return false,
    }
    let na = a.vertex_count();
    let nb = b.vertex_count();
    let n = na + nb;
    // union vertex v: < na comes from a, otherwise from b (offset by na)
    let children = |v: usize| -> Vec<(u64, usize)> {
        if v < na {
            a.children(v).to_vec()
        } else {
            b.children(v - na)
                .iter()
                .map(|&(l, to)| (l, to + na))
                .collect()
        }
    };
    let mut class = vec![0usize; n];
    loop {
        let mut signatures: BTreeMap<(usize, Vec<(u64, usize)>), usize> = BTreeMap::new();
        let mut next = vec![0usize; n];
        for v in 0..n {
            let mut sig: Vec<(u64, usize)> = children(v)
                .into_iter()
                .map(|(l, to)| (l, class[to]))
                .collect();
            sig.sort();
            sig.dedup();
            let key = (class[v], sig);
            let fresh = signatures.len();
            next[v] = *signatures.entry(key).or_insert(fresh);
        }
        if next == class {
            break;
        }
        class = next;
    }
    class[a.root().unwrap()] == class[na + b.root().unwrap()]
}

/// Depth-bounded bisimilarity of two regular trees.
pub fn bisimilar(a: &RegularTree, b: &RegularTree, depth: BisimDepth) -> bool {
    match depth {
        BisimDepth::Exact => bisimilar_exact(a, b),
        BisimDepth::Depth(d) => {
            CanonicalForm::of_regular(a, d) == CanonicalForm::of_regular(b, d)
        }
    }
}
