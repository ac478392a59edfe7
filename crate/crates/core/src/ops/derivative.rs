//! The pruning derivative, linearization, and the induced-label probe.

use crate::error::OpError;
use crate::machine::{BoxMachine, BufferedMachine, Decision};
use crate::point::Point;
use crate::trees::{
    code_path, label_position, tree_props, Edge, RegularTree, TreeCodeRep, UpWord,
};
use std::collections::{BTreeMap, BTreeSet};

/// The subtree of nodes whose subtrees have infinite height: keep exactly
/// the vertices from which a cycle is reachable. Any finite tree derives to
/// the empty tree.
pub fn prune_derivative(t: &RegularTree) -> RegularTree {
    let keep = t.vertices_with_infinite_height();
    t.restrict(&keep)
}

/// An oracle-backed realizer of the derivative for tree-code inputs: it
/// streams the input code with the cells of discarded nodes zeroed, so the
/// output always refines to the input (`H(p) ⊑ p` positionwise).
pub fn prune_derivative_realizer(rep: &TreeCodeRep) -> BoxMachine {
    let rep = rep.clone();
    let tree = rep.to_regular();
    let keep = tree.vertices_with_infinite_height();
    Box::new(BufferedMachine::new(move |buf, pos| {
        match buf.get(pos as usize) {
            None => Decision::Wait,
            Some(&v) => {
                let path = code_path(pos);
                let kept = match rep.resolve_regular(&path) {
                    Some(vertex) => keep.contains(&vertex),
                    None => false,
                };
                Decision::Emit(if kept { v } else { 0 })
            }
        }
    }))
}

/// Lexicographically least label sequence along an infinite branch, as an
/// eventually periodic word. `None` when the body is empty.
pub fn ind_label_up_word(t: &RegularTree) -> Option<UpWord> {
    let root = t.root()?;
    let core = t.vertices_with_infinite_height();
    if !core.contains(&root) {
        return None;
    }
    let mut state: BTreeSet<usize> = [root].into();
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut labels: Vec<u64> = Vec::new();
    loop {
        let key: Vec<usize> = state.iter().copied().collect();
        if let Some(&start) = seen.get(&key) {
            let period = labels.split_off(start);
            return Some(UpWord::new(labels, period));
        }
        seen.insert(key, labels.len());
        let m = state
            .iter()
            .flat_map(|&v| t.children(v).iter())
            .filter(|&&(_, to)| core.contains(&to))
            .map(|&(l, _)| l)
            .min()
            .expect("core vertices have core children");
        let next: BTreeSet<usize> = state
            .iter()
            .flat_map(|&v| t.children(v).iter())
            .filter(|&&(l, to)| l == m && core.contains(&to))
            .map(|&(_, to)| to)
            .collect();
        labels.push(m);
        state = next;
    }
}

/// Deterministic tightening of the induced-label probe: the label sequence
/// of the lexicographically least ultimately periodic branch of a pruned
/// tree with nonempty body.
pub fn ind_label(t: &RegularTree) -> Result<Point, OpError> {
    let props = tree_props(t);
    if !props.is_pruned || t.is_empty() {
        return Err(OpError::NotInDomain(
            "induced-label probe needs a pruned tree with nonempty body".into(),
        ));
    }
    let w = ind_label_up_word(t)
        .ok_or_else(|| OpError::NotInDomain("empty body".into()))?;
    Ok(super::up_word_point(&w))
}

/// Machine form of the probe: consumes a tree code and performs greedy
/// descent, emitting a label as soon as some child of the current node is
/// certified present and passing otherwise. A realizer of the multivalued
/// probe, not of the deterministic tightening above.
pub fn ind_label_machine() -> BoxMachine {
    Box::new(BufferedMachine::new(|buf, pos| {
        // Recompute the greedy descent over the visible prefix.
        let mut path: Vec<u64> = Vec::new();
        for _ in 0..=pos {
            let mut found = None;
            for slot in 0.. {
                let mut child = path.clone();
                child.push(slot);
                let cell = label_position(&child);
                if cell >= buf.len() as u64 {
                    break;
                }
                let v = buf[cell as usize];
                if v != 0 {
                    found = Some((child, v - 1));
                    break;
                }
            }
            match found {
                Some((child, label)) => {
                    path = child;
                    if path.len() as u64 == pos + 1 {
                        return Decision::Emit(label);
                    }
                }
                None => return Decision::Wait,
            }
        }
        Decision::Wait
    }))
}

/// The canonical linear tree (a chain closing into a cycle) whose single
/// infinite induced label is `w`.
pub fn chain_tree(w: &UpWord) -> RegularTree {
    let pre = w.preamble.len();
    let per = w.period.len();
    // Vertex i is the walk after i steps; the step after the first full
    // period returns to the period start.
    let n = pre + per;
    let mut edges = Vec::new();
    for (i, &l) in w.preamble.symbols().iter().enumerate() {
        edges.push(Edge { from: i, label: l, to: i + 1 });
    }
    for (j, &l) in w.period.symbols().iter().enumerate() {
        let from = pre + j;
        let to = if j + 1 == per { pre } else { pre + j + 1 };
        edges.push(Edge { from, label: l, to });
    }
    RegularTree::from_parts(n, Some(0), edges).expect("chain is reachable")
}

/// The unique proper pruned subtree of a proper finitely branching tree:
/// the pruned core collapsed onto its single shared label sequence.
pub fn linearize(t: &RegularTree) -> Result<RegularTree, OpError> {
    let props = tree_props(t);
    if !props.is_proper || !props.is_finitely_branching {
        return Err(OpError::NotInDomain(
            "linearization needs a proper finitely branching tree".into(),
        ));
    }
    let label = ind_label_up_word(t).expect("proper trees have nonempty body");
    Ok(chain_tree(&label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::run_machine_on_point;
    use crate::trees::{bisimilar_exact, encode_tree_seeded, FiniteTree};
    use crate::words::refines;

    fn self_loop(label: u64) -> RegularTree {
        RegularTree::from_parts(
            2,
            Some(0),
            vec![
                Edge { from: 0, label, to: 1 },
                Edge { from: 1, label, to: 1 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn derivative_of_pruned_tree_is_itself() {
        // One vertex with two self-loops labeled 0 and 1.
        let t = RegularTree::from_parts(
            2,
            Some(0),
            vec![
                Edge { from: 0, label: 0, to: 1 },
                Edge { from: 1, label: 0, to: 1 },
                Edge { from: 0, label: 1, to: 1 },
                Edge { from: 1, label: 1, to: 1 },
            ],
        )
        .unwrap();
        assert!(bisimilar_exact(&prune_derivative(&t), &t));
    }

    #[test]
    fn derivative_keeps_cycle_reaching_part() {
        // root -> A (1) with loop, root -> B (2), B -> C (3).
        let t = RegularTree::from_parts(
            4,
            Some(0),
            vec![
                Edge { from: 0, label: 1, to: 1 },
                Edge { from: 1, label: 1, to: 1 },
                Edge { from: 0, label: 2, to: 2 },
                Edge { from: 2, label: 3, to: 3 },
            ],
        )
        .unwrap();
        let d = prune_derivative(&t);
        assert!(bisimilar_exact(&d, &self_loop(1)));
    }

    #[test]
    fn derivative_of_finite_tree_is_empty() {
        let t = FiniteTree::new(vec![(vec![0], 4), (vec![1], 2)])
            .unwrap()
            .to_regular();
        assert!(prune_derivative(&t).is_empty());
    }

    #[test]
    fn realizer_refines_input() {
        let t = RegularTree::from_parts(
            4,
            Some(0),
            vec![
                Edge { from: 0, label: 1, to: 1 },
                Edge { from: 1, label: 1, to: 1 },
                Edge { from: 0, label: 2, to: 2 },
                Edge { from: 2, label: 3, to: 3 },
            ],
        )
        .unwrap();
        let p = encode_tree_seeded(&t, 0).unwrap();
        let rep = match &p {
            Point::TreeCode(rep) => rep.clone(),
            _ => unreachable!(),
        };
        let mut m = prune_derivative_realizer(&rep);
        let r = run_machine_on_point(m.as_mut(), &p, 64, 64);
        assert!(refines(&r.output, &p.prefix(r.output.len())));
        // The realizer's output decodes to the derivative.
        let decoded = crate::trees::decode_prefix(&r.output).unwrap().to_finite_tree();
        assert!(decoded.nodes().all(|(path, _)| path[0] == 0));
    }

    #[test]
    fn ind_label_of_self_loop() {
        let p = ind_label(&self_loop(5)).unwrap();
        assert_eq!(p.prefix(8), Point::constant(5).prefix(8));
    }

    #[test]
    fn ind_label_of_two_cycle() {
        let t = RegularTree::from_parts(
            3,
            Some(0),
            vec![
                Edge { from: 0, label: 1, to: 1 },
                Edge { from: 1, label: 2, to: 2 },
                Edge { from: 2, label: 1, to: 1 },
            ],
        )
        .unwrap();
        let p = ind_label(&t).unwrap();
        let want = Point::eventually_periodic(vec![], vec![1, 2]).unwrap();
        assert_eq!(p.prefix(12), want.prefix(12));
    }

    #[test]
    fn ind_label_rejects_finite_chain() {
        let t = FiniteTree::new(vec![(vec![0], 9)]).unwrap().to_regular();
        assert!(ind_label(&t).is_err());
    }

    #[test]
    fn ind_label_machine_reads_chain_code() {
        let t = chain_tree(&UpWord::new(vec![7, 3], vec![5, 1]));
        let p = encode_tree_seeded(&t, 0).unwrap();
        let mut m = ind_label_machine();
        let r = run_machine_on_point(m.as_mut(), &p, 5, 100_000);
        assert!(r.output.len() >= 5);
        assert_eq!(&r.output.symbols()[..5], &[7, 3, 5, 1, 5]);
    }

    #[test]
    fn linearize_drops_finite_hair() {
        // Self-loop labeled 5 with a finite hair attached at the root.
        let t = RegularTree::from_parts(
            3,
            Some(0),
            vec![
                Edge { from: 0, label: 5, to: 1 },
                Edge { from: 1, label: 5, to: 1 },
                Edge { from: 0, label: 5, to: 2 },
            ],
        )
        .unwrap();
        let lin = linearize(&t).unwrap();
        assert!(bisimilar_exact(&lin, &self_loop(5)));
    }

    #[test]
    fn linearize_fixed_point() {
        let t = self_loop(2);
        assert!(bisimilar_exact(&linearize(&t).unwrap(), &t));
    }

    #[test]
    fn linearize_rejects_improper() {
        let t = RegularTree::from_parts(
            2,
            Some(0),
            vec![
                Edge { from: 0, label: 0, to: 1 },
                Edge { from: 1, label: 0, to: 1 },
                Edge { from: 0, label: 1, to: 1 },
                Edge { from: 1, label: 1, to: 1 },
            ],
        )
        .unwrap();
        assert!(linearize(&t).is_err());
    }
}
