//! End-to-end checks of the reduction witness catalog: composites around
//! exact oracles reproduce target evaluators, machines agree with their
//! symbolic shadows, and corrupted witnesses are caught.

use wadge_core::machine::run_machine_on_point;
use wadge_core::ops;
use wadge_core::point::Point;
use wadge_core::trees::{encode_tree_seeded, Edge, RegularTree};
use wadge_core::weihrauch::{
    apply_witness, build_witness, list_witnesses, oracle, samples_for, verify_witness,
    CompareMode, SampleStatus, DEFAULT_FUEL,
};
use wadge_core::words::pair;

#[test]
fn catalog_lists_eight_names() {
    let names = list_witnesses();
    assert_eq!(names.len(), 8);
    for n in &names {
        assert!(build_witness(n).is_ok(), "missing witness {n}");
    }
    assert!(build_witness("no-such-name").is_err());
}

#[test]
fn all_catalog_witnesses_verify_on_samples() {
    for name in list_witnesses() {
        let samples = samples_for(name, 41, 20);
        let report = verify_witness(name, &samples, 10, DEFAULT_FUEL).unwrap();
        assert!(
            report.strict_pass(),
            "witness {name} failed:\n{}",
            report.render()
        );
    }
}

#[test]
fn is_finite_below_td_traces_the_count() {
    // Two 1s then zeros: the derivative's surviving branch is labeled 3
    // throughout, and the decoded answer is "finite".
    let p = Point::eventually_periodic(vec![1, 1], vec![0]).unwrap();
    let w = build_witness("isFinite≤TD").unwrap();
    let g = oracle("td").unwrap();

    let pre = (w.pre_shadow.as_ref().unwrap())(&p).unwrap();
    let derivative = g.evaluate(&pre).unwrap();
    // Unique root child carries label 3 = count 2 + 1.
    let mut heads = Vec::new();
    for k in 0..24 {
        let v = derivative.query(pair(k, 0));
        if v != 0 {
            heads.push(v - 1);
        }
    }
    assert_eq!(heads, vec![3]);

    let out = apply_witness(&w, &g, &p, 8, DEFAULT_FUEL).unwrap();
    assert_eq!(out.symbols(), &[1; 8]);
}

#[test]
fn is_finite_below_td_on_all_ones() {
    let p = Point::constant(1);
    let w = build_witness("isFinite≤TD").unwrap();
    let g = oracle("td").unwrap();
    let out = apply_witness(&w, &g, &p, 6, DEFAULT_FUEL).unwrap();
    assert_eq!(out.symbols(), &[0; 6]);
}

/// Machine outputs must match their symbolic shadows symbol for symbol for
/// the witnesses whose shadow fixes the same concrete layout.
#[test]
fn pre_machines_agree_with_shadows() {
    let aligned = [
        "parTD≤TD",
        "TD≤parIsFinite",
        "isFinite≤TD",
        "cyl-TD",
        "cyl-lim",
        "Linearize≤lim",
        "cyl-Linearize",
    ];
    for name in aligned {
        let w = build_witness(name).unwrap();
        let samples = samples_for(name, 99, 4);
        for (i, p) in samples.iter().enumerate() {
            let shadow = (w.pre_shadow.as_ref().unwrap())(p).unwrap();
            let mut m = w.pre_machine();
            let run = run_machine_on_point(m.as_mut(), p, 48, 4_000);
            assert!(run.rejected.is_none(), "{name} sample {i} rejected");
            let got = run.output;
            let want = shadow.prefix(got.len());
            assert_eq!(got, want, "{name} sample {i}: machine differs from shadow");
        }
    }
}

#[test]
fn post_machines_agree_with_shadows_at_small_depth() {
    // For witnesses with both a post shadow and a machine, the machine
    // route must reproduce the shadow's stream on a short prefix.
    for name in ["isFinite≤TD", "cyl-lim", "Linearize≤lim"] {
        let w = build_witness(name).unwrap();
        let g = oracle(&w.oracle_name).unwrap();
        let samples = samples_for(name, 7, 3);
        for p in &samples {
            let pre = (w.pre_shadow.as_ref().unwrap())(p).unwrap();
            let answer = g.evaluate(&pre).unwrap();
            let shadow_out = (w.post_shadow.as_ref().unwrap())(p, &answer).unwrap();
            let got =
                wadge_core::weihrauch::run_post_machine(&w, p, &answer, 4, 200_000).unwrap();
            assert_eq!(got, shadow_out.prefix(4), "{name} post machine drifted");
        }
    }
}

#[test]
fn cylinder_checks_pass() {
    for (op, witness) in [("td", "cyl-TD"), ("lim", "cyl-lim"), ("linearize", "cyl-Linearize")] {
        let samples = samples_for(witness, 23, 20);
        let report = wadge_core::weihrauch::cylinder_check(op, &samples, 10, DEFAULT_FUEL).unwrap();
        assert!(report.strict_pass(), "cylinder {op}:\n{}", report.render());
    }
}

#[test]
fn corrupted_witness_is_caught() {
    // Shift the answer bit of the finiteness witness by one.
    let mut w = build_witness("isFinite≤TD").unwrap();
    w.post_shadow = Some(std::sync::Arc::new(|_, g: &Point| {
        for k in 0..64 {
            let v = g.query(pair(k, 0));
            if v != 0 {
                // off-by-one corruption
                return Ok(Point::constant(if v == 1 { 1 } else { 0 }));
            }
        }
        unreachable!()
    }));
    let samples = samples_for("isFinite≤TD", 3, 10);
    let report = wadge_core::weihrauch::verify_reduction(&w, &samples, 8, DEFAULT_FUEL).unwrap();
    assert!(!report.pass());
    assert!(report
        .samples
        .iter()
        .any(|s| matches!(s, SampleStatus::Mismatch { .. })));
}

#[test]
fn td_composition_reproduces_exact_derivative() {
    // The plain witness through the parallel finiteness oracle rebuilds the
    // derivative exactly, up to bisimilarity, on every sampled tree.
    let w = build_witness("TD≤parIsFinite").unwrap();
    assert_eq!(w.compare, CompareMode::TreeBisim);
    let samples = samples_for("TD≤parIsFinite", 17, 30);
    let report = verify_witness("TD≤parIsFinite", &samples, 10, DEFAULT_FUEL).unwrap();
    assert!(report.strict_pass(), "{}", report.render());
}

#[test]
fn par_td_star_construction_in_detail() {
    // root -> A(1) with loop; root -> B(2) -> C(3): derivative keeps A only.
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
    let finite = RegularTree::from_parts(
        2,
        Some(0),
        vec![Edge { from: 0, label: 4, to: 1 }],
    )
    .unwrap();
    let p = Point::columns(
        vec![
            encode_tree_seeded(&t, 0).unwrap(),
            encode_tree_seeded(&finite, 0).unwrap(),
        ],
        encode_tree_seeded(&RegularTree::empty(), 0).unwrap(),
    );
    let w = build_witness("parTD≤TD").unwrap();
    let g = oracle("td").unwrap();
    let got = wadge_core::weihrauch::apply_witness_point(&w, &g, &p).unwrap();
    // Column 0: derivative is the label-1 loop; column 1: empty.
    let c0 = wadge_core::point::column_of(&got, 0);
    let c1 = wadge_core::point::column_of(&got, 1);
    let c0_tree = match &c0 {
        Point::TreeCode(rep) => rep.to_regular(),
        _ => panic!("expected tree code"),
    };
    assert!(wadge_core::trees::bisimilar_exact(
        &c0_tree,
        &ops::prune_derivative(&t)
    ));
    assert!((0..64).all(|i| c1.query(i) == 0));
}

#[test]
fn linearize_below_lim_ends_at_the_right_chain() {
    // Self-loop labeled 5 with a finite hair: the composite's output code
    // decodes to the linear tree with constant label 5.
    let t = RegularTree::from_parts(
        3,
        Some(0),
        vec![
            Edge { from: 0, label: 5, to: 1 },
            Edge { from: 1, label: 5, to: 1 },
            Edge { from: 0, label: 2, to: 2 },
        ],
    )
    .unwrap();
    let p = encode_tree_seeded(&t, 0).unwrap();
    let w = build_witness("Linearize≤lim").unwrap();
    let g = oracle("lim").unwrap();
    let out = wadge_core::weihrauch::apply_witness_point(&w, &g, &p).unwrap();
    let out_tree = match &out {
        Point::TreeCode(rep) => rep.to_regular(),
        _ => panic!("expected tree code"),
    };
    let want = ops::linearize(&t).unwrap();
    assert!(wadge_core::trees::bisimilar_exact(&out_tree, &want));
    let label = ops::ind_label(&out_tree).unwrap();
    assert_eq!(label.prefix(6), Point::constant(5).prefix(6));
}

#[test]
fn backward_lim_witness_on_converged_input() {
    // All columns already equal: the composite through the linearize oracle
    // returns the common column.
    let q = Point::eventually_periodic(vec![2], vec![7, 0]).unwrap();
    let p = Point::columns(vec![q.clone(), q.clone()], q.clone());
    let w = build_witness("lim≤Linearize").unwrap();
    let g = oracle("linearize").unwrap();
    let out = apply_witness(&w, &g, &p, 50, DEFAULT_FUEL).unwrap();
    assert_eq!(out, q.prefix(50));
}

#[test]
fn forward_witness_output_is_always_a_proper_pruned_code() {
    let w = build_witness("Linearize≤lim").unwrap();
    let g = oracle("lim").unwrap();
    for p in samples_for("Linearize≤lim", 57, 12) {
        let out = wadge_core::weihrauch::apply_witness_point(&w, &g, &p).unwrap();
        let tree = match &out {
            Point::TreeCode(rep) => rep.to_regular(),
            _ => panic!("expected tree code"),
        };
        let props = wadge_core::trees::tree_props(&tree);
        assert!(props.is_proper && props.is_pruned);
    }
}
