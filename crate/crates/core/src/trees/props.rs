//! Structural predicates on trees, the star construction, and induced
//! label enumeration.

use super::{Edge, FiniteTree, RegularTree};
use crate::words::Word;
use std::collections::{BTreeMap, BTreeSet};

/// An eventually periodic word: `preamble` followed by `period` repeated
/// forever. Equality is stream equality, not descriptor equality.
#[derive(Clone, Debug)]
pub struct UpWord {
    pub preamble: Word,
    pub period: Word,
}

impl UpWord {
    pub fn new(preamble: impl Into<Word>, period: impl Into<Word>) -> Self {
        let period = period.into();
        assert!(!period.is_empty(), "period must be nonempty");
        UpWord {
            preamble: preamble.into(),
            period,
        }
    }

    pub fn constant(symbol: u64) -> Self {
        UpWord::new(vec![], vec![symbol])
    }

    pub fn query(&self, i: u64) -> u64 {
        let pre = self.preamble.len() as u64;
        if i < pre {
            self.preamble.get(i as usize).unwrap()
        } else {
            let j = (i - pre) % self.period.len() as u64;
            self.period.get(j as usize).unwrap()
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n as u64).map(|i| self.query(i)).collect())
    }

    /// Stream equality: the two descriptors denote the same infinite word.
    pub fn stream_eq(&self, other: &UpWord) -> bool {
        let lcm = {
            let (a, b) = (self.period.len() as u64, other.period.len() as u64);
            let gcd = {
                let (mut x, mut y) = (a, b);
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                x
            };
            a / gcd * b
        };
        let bound = self.preamble.len().max(other.preamble.len()) as u64 + lcm;
        (0..bound).all(|i| self.query(i) == other.query(i))
    }
}

impl PartialEq for UpWord {
    fn eq(&self, other: &Self) -> bool {
        self.stream_eq(other)
    }
}
impl Eq for UpWord {}

/// Structural facts about a regular tree, exact on the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeProps {
    /// At most one child per node, up to bisimilarity of subtrees.
    pub is_linear: bool,
    /// Every node has at least one child (vacuous for the empty tree).
    pub is_pruned: bool,
    /// Nonempty body and all infinite branches carry one label sequence.
    pub is_proper: bool,
    /// Always true for a regular presentation.
    pub is_finitely_branching: bool,
    /// `None` means infinite.
    pub height: Option<u64>,
}

/// Exact bisimilarity classes of the vertices of one tree.
fn exact_classes(t: &RegularTree) -> Vec<usize> {
    let n = t.vertex_count();
    let mut class = vec![0usize; n];
    loop {
        let mut signatures: BTreeMap<(usize, Vec<(u64, usize)>), usize> = BTreeMap::new();
        let mut next = vec![0usize; n];
        for v in 0..n {
            let mut sig: Vec<(u64, usize)> = t
                .children(v)
                .iter()
                .map(|&(l, to)| (l, class[to]))
                .collect();
            sig.sort();
            sig.dedup();
            let key = (class[v], sig);
            let fresh = signatures.len();
            next[v] = *signatures.entry(key).or_insert(fresh);
        }
        if next == class {
            return class;
        }
        class = next;
    }
}

pub fn tree_props(t: &RegularTree) -> TreeProps {
    if t.is_empty() {
        return TreeProps {
            is_linear: true,
            is_pruned: true,
            is_proper: false,
            is_finitely_branching: true,
            height: Some(0),
        };
    }
    let root = t.root().unwrap();
    let class = exact_classes(t);
    let is_linear = (0..t.vertex_count()).all(|v| {
        let mut sig: Vec<(u64, usize)> = t
            .children(v)
            .iter()
            .map(|&(l, to)| (l, class[to]))
            .collect();
        sig.sort();
        sig.dedup();
        sig.len() <= 1
    });
    let is_pruned = (0..t.vertex_count()).all(|v| !t.children(v).is_empty());
    let core = t.vertices_with_infinite_height();
    let is_proper = core.contains(&root) && branches_share_labels(t, &core, root);
    TreeProps {
        is_linear,
        is_pruned,
        is_proper,
        is_finitely_branching: true,
        height: t.height(),
    }
}

/// Do all infinite branches carry the same label sequence? Checked on the
/// product of the infinite-height core with itself: two core vertices
/// reachable at a common depth must offer the same single continuation label.
fn branches_share_labels(t: &RegularTree, core: &BTreeSet<usize>, root: usize) -> bool {
    let core_labels = |v: usize| -> BTreeSet<u64> {
        t.children(v)
            .iter()
            .filter(|&&(_, to)| core.contains(&to))
            .map(|&(l, _)| l)
            .collect()
    };
    let mut seen = BTreeSet::new();
    let mut queue = vec![(root, root)];
    while let Some((u, v)) = queue.pop() {
        if !seen.insert((u, v)) {
            continue;
        }
        let lu = core_labels(u);
        let lv = core_labels(v);
        let all: BTreeSet<u64> = lu.union(&lv).copied().collect();
        if all.len() > 1 {
            return false;
        }
        let Some(&label) = all.iter().next() else {
            continue;
        };
        for &(la, ua) in t.children(u) {
            if la != label || !core.contains(&ua) {
                continue;
            }
            for &(lb, vb) in t.children(v) {
                if lb == label && core.contains(&vb) {
                    queue.push((ua, vb));
                }
            }
        }
    }
    true
}

/// The star of a tree: every label incremented, root-children shifted up one
/// slot, and an infinite 0-labeled spine adjoined at slot 0. The result
/// always has infinite height, and its pruning derivative is never empty.
pub fn star_tree(t: &RegularTree) -> RegularTree {
    if t.is_empty() {
        // Just the spine.
        return RegularTree::from_parts(
            2,
            Some(0),
            vec![
                Edge { from: 0, label: 0, to: 1 },
                Edge { from: 1, label: 0, to: 1 },
            ],
        )
        .unwrap();
    }
    let shifted = t.map_labels(|l| l + 1);
    let n = shifted.vertex_count();
    let spine = n;
    let mut edges = shifted.edges();
    edges.push(Edge {
        from: shifted.root().unwrap(),
        label: 0,
        to: spine,
    });
    edges.push(Edge {
        from: spine,
        label: 0,
        to: spine,
    });
    RegularTree::from_parts(n + 1, shifted.root(), edges).unwrap()
}

/// Finite induced labels of a regular tree, up to length `max_len`.
///
/// A word `s` of length `m` is induced when some node at depth `m + 1`
/// exists whose first `m` ancestor labels spell `s`; the node's own label is
/// not part of the word.
pub fn induced_labels(t: &RegularTree, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let root = match t.root() {
        None => return out,
        Some(r) => r,
    };
    let mut frontier: BTreeSet<(usize, Word)> = [(root, Word::empty())].into();
    for _depth in 0..=max_len {
        let mut next = BTreeSet::new();
        for (v, w) in &frontier {
            for &(label, to) in t.children(*v) {
                // reaching depth |w| + 1 certifies w as induced
                out.insert(w.clone());
                let mut w2 = w.clone();
                w2.push(label);
                next.insert((to, w2));
            }
        }
        frontier = next;
    }
    out
}

/// Finite induced labels of a finite tree (all of them).
pub fn induced_labels_finite(t: &FiniteTree) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for (path, _) in t.nodes() {
        let mut labels = Vec::new();
        for d in 1..path.len() {
            labels.push(t.label(&path[..d]).expect("prefix-closed"));
        }
        out.insert(Word(labels));
    }
    out
}

/// Eventually periodic label sequences along infinite branches, described as
/// simple-path-plus-simple-cycle lassos from the root. Deduplicated by
/// stream equality.
pub fn infinite_induced_labels(t: &RegularTree) -> Vec<UpWord> {
    let mut out: Vec<UpWord> = Vec::new();
    let root = match t.root() {
        None => return out,
        Some(r) => r,
    };
    // DFS over simple paths; a back-edge to a vertex on the path closes a lasso.
    fn dfs(
        t: &RegularTree,
        v: usize,
        path: &mut Vec<(usize, u64)>, // (vertex, label of edge leading in)
        on_path: &mut BTreeMap<usize, usize>, // vertex -> index in path
        out: &mut Vec<UpWord>,
    ) {
        for &(label, to) in t.children(v) {
            if let Some(&start) = on_path.get(&to) {
                let mut labels: Vec<u64> = path.iter().skip(1).map(|&(_, l)| l).collect();
                labels.push(label);
                let cycle = labels.split_off(start);
                let lasso = UpWord::new(labels, cycle);
                if !out.iter().any(|u| u.stream_eq(&lasso)) {
                    out.push(lasso);
                }
            } else {
                on_path.insert(to, path.len());
                path.push((to, label));
                dfs(t, to, path, on_path, out);
                path.pop();
                on_path.remove(&to);
            }
        }
    }
    let mut path = vec![(root, 0)];
    let mut on_path = BTreeMap::from([(root, 0usize)]);
    dfs(t, root, &mut path, &mut on_path, &mut out);
    out
}
