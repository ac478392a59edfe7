//! Seeded, reproducible generators for points, trees, and machines.
//!
//! All randomness flows through one ChaCha8 generator seeded explicitly, so
//! identical seeds give identical samples everywhere, including across the
//! command-line surface.

use crate::machine::{self, BoxMachine};
use crate::point::Point;
use crate::trees::{Edge, FiniteTree, RegularTree};
use crate::words::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self, bound: u64) -> u64 {
        self.rng.gen_range(0..bound)
    }

    pub fn word(&mut self, max_len: usize, symbol_bound: u64) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        Word((0..len).map(|_| self.rng.gen_range(0..symbol_bound)).collect())
    }

    fn nonempty_word(&mut self, max_len: usize, symbol_bound: u64) -> Word {
        let len = self.rng.gen_range(1..=max_len.max(1));
        Word((0..len).map(|_| self.rng.gen_range(0..symbol_bound)).collect())
    }

    /// An eventually periodic point with small preamble and period.
    pub fn ep_point(&mut self, symbol_bound: u64) -> Point {
        let pre = self.word(4, symbol_bound);
        let per = self.nonempty_word(4, symbol_bound);
        Point::eventually_periodic(pre, per).expect("nonempty period")
    }

    /// An eventually periodic bit stream.
    pub fn bit_point(&mut self) -> Point {
        self.ep_point(2)
    }

    /// A column table whose columns are literal or periodic points; always
    /// in the domain of the pointwise limit.
    pub fn column_table(&mut self, max_cols: usize, symbol_bound: u64) -> Point {
        let n = self.rng.gen_range(0..=max_cols);
        let cols = (0..n).map(|_| self.flat_point(symbol_bound)).collect();
        Point::columns(cols, self.flat_point(symbol_bound))
    }

    /// A literal or eventually periodic point.
    pub fn flat_point(&mut self, symbol_bound: u64) -> Point {
        if self.rng.gen_bool(0.5) {
            Point::literal(self.word(5, symbol_bound), self.rng.gen_range(0..symbol_bound))
        } else {
            self.ep_point(symbol_bound)
        }
    }

    /// A finite labeled tree with at most `max_nodes` non-root nodes.
    pub fn finite_tree(
        &mut self,
        max_nodes: usize,
        max_breadth: u64,
        max_depth: usize,
        label_bound: u64,
    ) -> FiniteTree {
        let budget = self.rng.gen_range(0..=max_nodes);
        let mut nodes: Vec<(Vec<u64>, u64)> = Vec::new();
        let mut frontier: Vec<Vec<u64>> = vec![vec![]];
        while nodes.len() < budget && !frontier.is_empty() {
            let idx = self.rng.gen_range(0..frontier.len());
            let parent = frontier[idx].clone();
            if parent.len() >= max_depth {
                frontier.remove(idx);
                continue;
            }
            let slot = self.rng.gen_range(0..max_breadth);
            let mut child = parent.clone();
            child.push(slot);
            if nodes.iter().any(|(p, _)| *p == child) {
                continue;
            }
            let label = self.rng.gen_range(0..label_bound);
            nodes.push((child.clone(), label));
            frontier.push(child);
        }
        FiniteTree::new(nodes).expect("constructed prefix-closed")
    }

    /// A regular tree with at most `max_vertices` vertices, built as a
    /// random spanning tree plus extra edges (so every vertex is reachable).
    /// Never the bare root, which codes nothing.
    pub fn regular_tree(&mut self, max_vertices: usize, label_bound: u64) -> RegularTree {
        let n = self.rng.gen_range(2..=max_vertices.max(2));
        let mut edges = Vec::new();
        for v in 1..n {
            let parent = self.rng.gen_range(0..v);
            edges.push(Edge {
                from: parent,
                label: self.rng.gen_range(0..label_bound),
                to: v,
            });
        }
        let extra = self.rng.gen_range(0..=n);
        for _ in 0..extra {
            edges.push(Edge {
                from: self.rng.gen_range(0..n),
                label: self.rng.gen_range(0..label_bound),
                to: self.rng.gen_range(0..n),
            });
        }
        RegularTree::from_parts(n, Some(0), edges).expect("spanning construction reaches all")
    }

    /// A regular tree guaranteed to have a cycle reachable from the root
    /// (nonempty pruning derivative).
    pub fn regular_tree_with_cycle(&mut self, max_vertices: usize, label_bound: u64) -> RegularTree {
        loop {
            let t = self.regular_tree(max_vertices, label_bound);
            if t.height().is_none() {
                return t;
            }
        }
    }

    /// A proper finitely branching regular tree: a labeled lasso (its unique
    /// infinite label sequence) with finite hairs attached along it.
    pub fn proper_tree(&mut self, label_bound: u64, max_hairs: usize) -> RegularTree {
        let pre_len = self.rng.gen_range(0..3usize);
        let per_len = self.rng.gen_range(1..4usize);
        let spine: Vec<u64> = (0..pre_len + per_len)
            .map(|_| self.rng.gen_range(0..label_bound))
            .collect();
        // Vertices 0..=pre_len+per_len-1 form the lasso; the last spine edge
        // closes into the period start.
        let lasso_len = pre_len + per_len;
        let mut edges = Vec::new();
        for (i, &l) in spine.iter().enumerate() {
            let to = if i + 1 == lasso_len { pre_len } else { i + 1 };
            edges.push(Edge { from: i, label: l, to });
        }
        let mut vertex_count = lasso_len;

        let hairs = self.rng.gen_range(0..=max_hairs);
        for _ in 0..hairs {
            let attach = self.rng.gen_range(0..lasso_len);
            let len = self.rng.gen_range(1..3usize);
            let mut from = attach;
            for _ in 0..len {
                let v = vertex_count;
                vertex_count += 1;
                edges.push(Edge {
                    from,
                    label: self.rng.gen_range(0..label_bound),
                    to: v,
                });
                from = v;
            }
        }
        RegularTree::from_parts(vertex_count, Some(0), edges).expect("lasso construction valid")
    }

    /// A machine description drawn from the basic catalog; realize it with
    /// [`build_machine`]. Splitting description from construction lets the
    /// same machine be instantiated fresh more than once.
    pub fn machine_plan(&mut self, depth: usize) -> MachinePlan {
        if depth == 0 {
            return match self.rng.gen_range(0..3) {
                0 => MachinePlan::Identity,
                1 => MachinePlan::Constant(self.rng.gen_range(0..4)),
                _ => MachinePlan::Add(self.rng.gen_range(0..5)),
            };
        }
        match self.rng.gen_range(0..3) {
            0 => MachinePlan::Compose(
                Box::new(self.machine_plan(depth - 1)),
                Box::new(self.machine_plan(depth - 1)),
            ),
            1 => MachinePlan::Pair(
                Box::new(self.machine_plan(depth - 1)),
                Box::new(self.machine_plan(depth - 1)),
            ),
            _ => self.machine_plan(0),
        }
    }
}

/// A reconstructible description of a basic catalog machine.
#[derive(Clone, Debug)]
pub enum MachinePlan {
    Identity,
    Constant(u64),
    Add(u64),
    Compose(Box<MachinePlan>, Box<MachinePlan>),
    Pair(Box<MachinePlan>, Box<MachinePlan>),
}

pub fn build_machine(plan: &MachinePlan) -> BoxMachine {
    match plan {
        MachinePlan::Identity => machine::identity(),
        MachinePlan::Constant(c) => machine::constant(*c),
        MachinePlan::Add(a) => {
            let a = *a;
            machine::value_map(move |v| v + a)
        }
        MachinePlan::Compose(f, g) => machine::compose(build_machine(f), build_machine(g)),
        MachinePlan::Pair(f, g) => machine::pair_machines(build_machine(f), build_machine(g)),
    }
}

/// Deterministic structured enumeration of finite labeled trees: all trees
/// over the depth-3 skeleton with slots below `breadth`, plus slot-0/1
/// chains, with labels below `label_bound`, up to `max_nodes` non-root
/// nodes. Stops after `cap` trees.
pub fn enumerate_small_finite_trees(
    breadth: u64,
    label_bound: u64,
    max_nodes: usize,
    cap: usize,
) -> Vec<FiniteTree> {
    let mut out = vec![FiniteTree::empty()];
    // Candidate node paths of the bounded skeleton, in a fixed order.
    let mut skeleton: Vec<Vec<u64>> = Vec::new();
    for a in 0..breadth {
        skeleton.push(vec![a]);
        for b in 0..breadth {
            skeleton.push(vec![a, b]);
            for c in 0..breadth {
                skeleton.push(vec![a, b, c]);
            }
        }
    }
    // Depth-first enumeration of prefix-closed subsets with labels.
    fn extend(
        skeleton: &[Vec<u64>],
        label_bound: u64,
        max_nodes: usize,
        cap: usize,
        chosen: &mut Vec<(Vec<u64>, u64)>,
        from: usize,
        out: &mut Vec<FiniteTree>,
    ) {
        if out.len() >= cap {
            return;
        }
        if !chosen.is_empty() {
            out.push(FiniteTree::new(chosen.clone()).expect("prefix-closed by construction"));
        }
        if chosen.len() >= max_nodes {
            return;
        }
        for i in from..skeleton.len() {
            let path = &skeleton[i];
            let parent_ok = path.len() == 1
                || chosen.iter().any(|(p, _)| p[..] == path[..path.len() - 1]);
            if !parent_ok {
                continue;
            }
            for label in 0..label_bound {
                chosen.push((path.clone(), label));
                extend(skeleton, label_bound, max_nodes, cap, chosen, i + 1, out);
                chosen.pop();
                if out.len() >= cap {
                    return;
                }
            }
        }
    }
    let mut chosen = Vec::new();
    extend(&skeleton, label_bound, max_nodes, cap, &mut chosen, 0, &mut out);
    // A few deeper chains at slots 0 and 1 (cheap code positions).
    for len in 4..=5usize {
        for label in 0..label_bound.min(2) {
            for slot in 0..2u64 {
                let mut nodes = Vec::new();
                let mut path = Vec::new();
                for d in 0..len {
                    path.push(if d == 0 { slot } else { 0 });
                    nodes.push((path.clone(), label));
                }
                out.push(FiniteTree::new(nodes).unwrap());
            }
        }
    }
    out.truncate(cap.max(1));
    out
}
