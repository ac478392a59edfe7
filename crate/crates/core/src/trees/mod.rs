//! Labeled trees in two presentations: explicit finite trees and regular
//! trees (finite rooted labeled graphs whose unfolding is the tree).
//!
//! The label of a node is carried by the edge leading into it; roots are
//! unlabeled. A tree is either empty or has a root plus at least one more
//! node; the degenerate root-only tree is excluded everywhere.

mod bisim;
mod codec;
mod props;

pub use bisim::{bisimilar, bisimilar_exact, canonical_form, BisimDepth, CanonicalForm};
pub use codec::{
    code_path, decode_prefix, decode_stage, encode_tree, encode_tree_seeded, label_position,
    PartialTree, TreeCodeRep,
};
pub use props::{
    induced_labels, induced_labels_finite, infinite_induced_labels, star_tree, tree_props,
    TreeProps, UpWord,
};

use crate::error::TreeError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// An explicit finite labeled tree: a prefix-closed set of nonempty paths,
/// each carrying a label. The empty map is the empty tree (no root); a
/// nonempty map denotes the root plus the listed nodes.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FiniteTree {
    labels: BTreeMap<Vec<u64>, u64>,
}

impl FiniteTree {
    pub fn empty() -> Self {
        FiniteTree::default()
    }

    /// Builds a tree from `(path, label)` pairs, checking prefix closure.
    pub fn new(nodes: impl IntoIterator<Item = (Vec<u64>, u64)>) -> Result<Self, TreeError> {
        let labels: BTreeMap<Vec<u64>, u64> = nodes.into_iter().collect();
        for path in labels.keys() {
            if path.is_empty() {
                return Err(TreeError::RootNotLabelable);
            }
            let mut prefix = path.clone();
            prefix.pop();
            if !prefix.is_empty() && !labels.contains_key(&prefix) {
                return Err(TreeError::NotPrefixClosed { path: path.clone() });
            }
        }
        Ok(FiniteTree { labels })
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Non-root nodes with their labels, in path order.
    pub fn nodes(&self) -> impl Iterator<Item = (&Vec<u64>, u64)> {
        self.labels.iter().map(|(p, &l)| (p, l))
    }

    pub fn node_count(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.labels.len() + 1
        }
    }

    pub fn label(&self, path: &[u64]) -> Option<u64> {
        self.labels.get(path).copied()
    }

    pub fn contains(&self, path: &[u64]) -> bool {
        path.is_empty() && !self.is_empty() || self.labels.contains_key(path)
    }

    /// Children slots of a node, ascending.
    pub fn child_slots(&self, path: &[u64]) -> Vec<u64> {
        let mut out = Vec::new();
        for (p, _) in self.labels.range(path.to_vec()..) {
            if !p.starts_with(path) {
                break;
            }
            if p.len() == path.len() + 1 {
                out.push(p[path.len()]);
            }
        }
        out.sort();
        out
    }

    pub fn height(&self) -> u64 {
        self.labels.keys().map(|p| p.len() as u64).max().unwrap_or(0)
    }

    /// Depth-first conversion into a regular tree (slot information is lost;
    /// the unfolding of the result is label-isomorphic to `self`).
    pub fn to_regular(&self) -> RegularTree {
        if self.is_empty() {
            return RegularTree::empty();
        }
        let mut paths: Vec<&Vec<u64>> = self.labels.keys().collect();
        paths.sort();
        let mut index: BTreeMap<&[u64], usize> = BTreeMap::new();
        index.insert(&[], 0);
        for (i, p) in paths.iter().enumerate() {
            index.insert(p.as_slice(), i + 1);
        }
        let mut edges = Vec::new();
        for p in &paths {
            let parent = &p[..p.len() - 1];
            edges.push(Edge {
                from: index[parent],
                label: self.labels[*p],
                to: index[p.as_slice()],
            });
        }
        RegularTree::from_parts(paths.len() + 1, Some(0), edges).expect("finite tree is a valid graph")
    }
}

/// One labeled edge of a regular tree graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub label: u64,
    pub to: usize,
}

/// A finite rooted labeled graph presenting a (possibly infinite) tree as
/// its unfolding. Every vertex is reachable from the root; the unfolding
/// has infinite height exactly when a cycle is reachable.
///
/// The empty tree is the graph with no vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularTree {
    vertex_count: usize,
    root: Option<usize>,
    /// children[v] sorted by (label, to); duplicates kept (edge multiset).
    children: Vec<Vec<(u64, usize)>>,
}

impl RegularTree {
    pub fn empty() -> Self {
        RegularTree {
            vertex_count: 0,
            root: None,
            children: Vec::new(),
        }
    }

    /// Builds from raw parts, checking root validity, edge endpoints, and
    /// reachability of every vertex from the root.
    pub fn from_parts(
        vertex_count: usize,
        root: Option<usize>,
        edges: Vec<Edge>,
    ) -> Result<Self, TreeError> {
        match root {
            None => {
                if vertex_count != 0 || !edges.is_empty() {
                    return Err(TreeError::MissingRoot);
                }
                Ok(RegularTree::empty())
            }
            Some(r) => {
                if r >= vertex_count {
                    return Err(TreeError::BadVertex { id: r as u64 });
                }
                let mut children = vec![Vec::new(); vertex_count];
                for e in &edges {
                    if e.from >= vertex_count || e.to >= vertex_count {
                        return Err(TreeError::BadVertex {
                            id: e.from.max(e.to) as u64,
                        });
                    }
                    children[e.from].push((e.label, e.to));
                }
                for c in &mut children {
                    c.sort();
                }
                let tree = RegularTree {
                    vertex_count,
                    root: Some(r),
                    children,
                };
                let reach = tree.reachable_from(r);
                if reach.len() != vertex_count {
                    let missing = (0..vertex_count).find(|v| !reach.contains(v)).unwrap();
                    return Err(TreeError::Unreachable { id: missing as u64 });
                }
                Ok(tree)
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sorted `(label, to)` out-edges of `v`.
    pub fn children(&self, v: usize) -> &[(u64, usize)] {
        &self.children[v]
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (from, cs) in self.children.iter().enumerate() {
            for &(label, to) in cs {
                out.push(Edge { from, label, to });
            }
        }
        out
    }

    fn reachable_from(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                for &(_, to) in &self.children[v] {
                    stack.push(to);
                }
            }
        }
        seen
    }

    /// Restricts to the vertices in `keep` reachable from the root, remapping
    /// indices in ascending order. Returns the empty tree when the root is
    /// not kept.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> RegularTree {
        let root = match self.root {
            Some(r) if keep.contains(&r) => r,
            _ => return RegularTree::empty(),
        };
        // Reachability within the kept subgraph.
        let mut seen = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                for &(_, to) in &self.children[v] {
                    if keep.contains(&to) {
                        stack.push(to);
                    }
                }
            }
        }
        let remap: BTreeMap<usize, usize> =
            seen.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for &v in &seen {
            for &(label, to) in &self.children[v] {
                if seen.contains(&to) {
                    edges.push(Edge {
                        from: remap[&v],
                        label,
                        to: remap[&to],
                    });
                }
            }
        }
        RegularTree::from_parts(seen.len(), Some(remap[&root]), edges)
            .expect("restriction preserves validity")
    }

    /// Vertices from which an infinite path leaves: the fixpoint of
    /// repeatedly discarding vertices with no remaining out-edge.
    pub fn vertices_with_infinite_height(&self) -> BTreeSet<usize> {
        let mut alive: BTreeSet<usize> = (0..self.vertex_count).collect();
        loop {
            let dead: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&v| !self.children[v].iter().any(|&(_, to)| alive.contains(&to)))
                .collect();
            if dead.is_empty() {
                return alive;
            }
            for v in dead {
                alive.remove(&v);
            }
        }
    }

    /// Height of the unfolding from vertex `v`: number of edges on the
    /// longest path, or `None` for infinite.
    pub fn height_from(&self, v: usize) -> Option<u64> {
        let infinite = self.vertices_with_infinite_height();
        if infinite.contains(&v) {
            return None;
        }
        // Acyclic part: longest path by memoized DFS.
        fn go(
            t: &RegularTree,
            v: usize,
            memo: &mut BTreeMap<usize, u64>,
        ) -> u64 {
            if let Some(&h) = memo.get(&v) {
                return h;
            }
            let h = t.children[v]
                .iter()
                .map(|&(_, to)| 1 + go(t, to, memo))
                .max()
                .unwrap_or(0);
            memo.insert(v, h);
            h
        }
        Some(go(self, v, &mut BTreeMap::new()))
    }

    /// Height of the whole tree (0 for the empty tree, `None` for infinite).
    pub fn height(&self) -> Option<u64> {
        match self.root {
            None => Some(0),
            Some(r) => self.height_from(r),
        }
    }

    /// Applies `f` to every edge label.
    pub fn map_labels(&self, f: impl Fn(u64) -> u64) -> RegularTree {
        let mut t = self.clone();
        for cs in &mut t.children {
            for (label, _) in cs.iter_mut() {
                *label = f(*label);
            }
            cs.sort();
        }
        t
    }
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Wire form of a regular tree: vertex ids are arbitrary u64s.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularTreeDoc {
    pub vertices: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<u64>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: u64,
    pub label: u64,
    pub to: u64,
}

/// Wire form of a finite tree.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteTreeDoc {
    pub nodes: Vec<FiniteNodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteNodeDoc {
    pub path: Vec<u64>,
    pub label: u64,
}

impl RegularTree {
    pub fn to_doc(&self) -> RegularTreeDoc {
        RegularTreeDoc {
            vertices: (0..self.vertex_count as u64).collect(),
            root: self.root.map(|r| r as u64),
            edges: self
                .edges()
                .into_iter()
                .map(|e| EdgeDoc {
                    from: e.from as u64,
                    label: e.label,
                    to: e.to as u64,
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &RegularTreeDoc) -> Result<Self, TreeError> {
        let mut ids = BTreeMap::new();
        for (i, &id) in doc.vertices.iter().enumerate() {
            if ids.insert(id, i).is_some() {
                return Err(TreeError::DuplicateVertex { id });
            }
        }
        let root = match doc.root {
            Some(id) => Some(*ids.get(&id).ok_or(TreeError::BadVertex { id })?),
            None => None,
        };
        if root.is_none() && !doc.vertices.is_empty() {
            return Err(TreeError::MissingRoot);
        }
        let mut edges = Vec::new();
        for e in &doc.edges {
            let from = *ids.get(&e.from).ok_or(TreeError::BadVertex { id: e.from })?;
            let to = *ids.get(&e.to).ok_or(TreeError::BadVertex { id: e.to })?;
            edges.push(Edge {
                from,
                label: e.label,
                to,
            });
        }
        RegularTree::from_parts(doc.vertices.len(), root, edges)
    }
}

impl FiniteTree {
    pub fn to_doc(&self) -> FiniteTreeDoc {
        FiniteTreeDoc {
            nodes: self
                .labels
                .iter()
                .map(|(p, &l)| FiniteNodeDoc {
                    path: p.clone(),
                    label: l,
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &FiniteTreeDoc) -> Result<Self, TreeError> {
        FiniteTree::new(doc.nodes.iter().map(|n| (n.path.clone(), n.label)))
    }
}
