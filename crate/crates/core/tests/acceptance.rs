//! The acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`). Every
//! tolerance is pinned here; a criterion fails loudly rather than loosening.

use std::collections::BTreeSet;
use wadge_core::games::{
    baire1_strategy, baire2_strategy, copy_strategy, run_game, strategy_from_witness, target,
    witness_from_strategy, Certificate, FrontEnd, GameConfig, Verdict,
};
use wadge_core::ops;
use wadge_core::point::Point;
use wadge_core::sampling::{enumerate_small_finite_trees, Sampler};
use wadge_core::trees::{
    decode_prefix, encode_tree, label_position, CanonicalForm, FiniteTree, RegularTree,
};
use wadge_core::weihrauch::{
    cylinder_check, identity_witness, list_witnesses, oracle, run_pre_machine, samples_for,
    transparency_check, verify_witness, SampleStatus, DEFAULT_FUEL,
};
use wadge_core::words::Word;

fn pass(criterion: &str, detail: String) {
    println!("ACCEPTANCE PASS {criterion}: {detail}");
}

/// Criterion 1: the codec recovers every small finite tree exactly from a
/// sufficiently long code prefix. Tolerance: exact equality.
#[test]
fn criterion_1_codec_exactness() {
    let trees = enumerate_small_finite_trees(3, 4, 8, 1400);
    assert!(trees.len() >= 1000, "enumeration too small: {}", trees.len());
    for t in &trees {
        let p = encode_tree(t);
        let need = t
            .nodes()
            .map(|(path, _)| label_position(path))
            .max()
            .map(|m| m + 1)
            .unwrap_or(4);
        let decoded = decode_prefix(&p.prefix(need as usize))
            .expect("own codes never violate the domain")
            .to_finite_tree();
        assert_eq!(&decoded, t, "codec roundtrip failed");
    }
    pass("1 codec-exactness", format!("{} trees, exact", trees.len()));
}

/// Independent oracle for criterion 2: try all child matchings.
fn brute_bisimilar(a: &FiniteTree, b: &FiniteTree, depth: u64) -> bool {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return true,
        (false, false) => {}
        _ => return false,
    }
    fn node(a: &FiniteTree, pa: &[u64], b: &FiniteTree, pb: &[u64], depth: u64) -> bool {
        if depth == 0 {
            return true;
        }
        let ca = a.child_slots(pa);
        let cb = b.child_slots(pb);
        let cover = |xs: &FiniteTree, pxs: &[u64], sx: &[u64], ys: &FiniteTree, pys: &[u64], sy: &[u64]| {
            sx.iter().all(|&i| {
                let mut px = pxs.to_vec();
                px.push(i);
                sy.iter().any(|&j| {
                    let mut py = pys.to_vec();
                    py.push(j);
                    xs.label(&px) == ys.label(&py) && node(xs, &px, ys, &py, depth - 1)
                })
            })
        };
        cover(a, pa, &ca, b, pb, &cb) && cover(b, pb, &cb, a, pa, &ca)
    }
    node(a, &[], b, &[], depth)
}

/// Criterion 2: depth-4 canonical forms agree with the all-matchings
/// checker on 500 random pairs. Tolerance: 0 disagreements.
#[test]
fn criterion_2_bisimulation_oracle_equivalence() {
    let mut s = Sampler::new(2024);
    let mut disagreements = 0;
    for i in 0..500 {
        let a = s.finite_tree(7, 3, 4, 3);
        // Half the pairs are mutations of the first tree, so both answers occur.
        let b = if i % 2 == 0 {
            s.finite_tree(7, 3, 4, 3)
        } else {
            let mut nodes: Vec<(Vec<u64>, u64)> = a.nodes().map(|(p, l)| (p.clone(), l)).collect();
            // Shift every top-level subtree one slot to the right: a
            // bisimilar relabeling of positions.
            for (p, _) in nodes.iter_mut() {
                p[0] += 1;
            }
            FiniteTree::new(nodes).unwrap()
        };
        let fast = CanonicalForm::of_finite(&a, 4) == CanonicalForm::of_finite(&b, 4);
        let slow = brute_bisimilar(&a, &b, 4);
        if fast != slow {
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
    pass("2 bisimulation-oracle", "500 pairs, 0 disagreements".into());
}

/// Independent oracle for criterion 3: a vertex keeps descendants at every
/// level up to twice the vertex count iff a cycle is reachable from it.
fn unfolding_oracle(t: &RegularTree) -> BTreeSet<usize> {
    let bound = 2 * t.vertex_count();
    let mut reach_depth = vec![true; t.vertex_count()];
    for _ in 0..bound {
        let next: Vec<bool> = (0..t.vertex_count())
            .map(|v| t.children(v).iter().any(|&(_, to)| reach_depth[to]))
            .collect();
        reach_depth = next;
    }
    (0..t.vertex_count()).filter(|&v| reach_depth[v]).collect()
}

/// Criterion 3: the derivative agrees vertexwise with the bounded
/// unfolding oracle on 200 random regular trees. Tolerance: 0.
#[test]
fn criterion_3_derivative_exactness() {
    let mut s = Sampler::new(3033);
    for _ in 0..200 {
        let t = s.regular_tree(10, 4);
        let fast = t.vertices_with_infinite_height();
        let slow = unfolding_oracle(&t);
        assert_eq!(fast, slow, "derivative disagreed on {t:?}");
    }
    pass("3 derivative-exactness", "200 trees, vertexwise agreement".into());
}

/// Criterion 4: every catalog witness passes verification on 100 seeded
/// samples at depth 10. Tolerance: 0 mismatches, fuel exhaustion counts
/// as failure.
#[test]
fn criterion_4_witness_suite() {
    for name in list_witnesses() {
        let samples = samples_for(name, 44_000 + name.len() as u64, 100);
        let report = verify_witness(name, &samples, 10, DEFAULT_FUEL).unwrap();
        assert!(
            report.strict_pass(),
            "witness {name} failed:\n{}",
            report.render()
        );
        assert_eq!(report.fuel_exhausted(), 0);
    }
    pass("4 witness-suite", "8 witnesses x 100 samples, depth 10".into());
}

/// Criterion 5: the cylinder composites reproduce the pairing of input and
/// oracle answer, symbol for symbol, on 100 samples at depth 10.
#[test]
fn criterion_5_cylinder_checks() {
    for op in ["td", "lim", "linearize"] {
        let witness = match op {
            "td" => "cyl-TD",
            "lim" => "cyl-lim",
            _ => "cyl-Linearize",
        };
        let samples = samples_for(witness, 5500, 100);
        let report = cylinder_check(op, &samples, 10, DEFAULT_FUEL).unwrap();
        assert!(report.strict_pass(), "cylinder {op}:\n{}", report.render());
    }
    pass("5 cylinder-checks", "td, lim, linearize x 100 samples".into());
}

/// Criterion 6: the transparency consequence pairs pass on 100 samples and
/// the designed negative pair fails with a reported sample.
#[test]
fn criterion_6_transparency_checks() {
    for (op, g, f) in [
        ("lim", "plus1", "plus1"),
        ("td", "inc-labels", "inc-labels"),
        ("linearize", "inc-labels", "inc-labels"),
    ] {
        let samples = samples_for(op, 6600, 100);
        let report = transparency_check(op, g, f, &samples, 10).unwrap();
        assert!(
            report.strict_pass(),
            "transparency {op} ({g}, {f}):\n{}",
            report.render()
        );
    }
    let samples = samples_for("td", 6601, 100);
    let negative = transparency_check("td", "const-first-label", "id", &samples, 10).unwrap();
    assert!(!negative.pass(), "negative pair passed unexpectedly");
    assert!(negative
        .samples
        .iter()
        .any(|s| matches!(s, SampleStatus::Mismatch { .. })));
    pass(
        "6 transparency-checks",
        format!(
            "3 positive pairs pass; negative pair fails on {} samples",
            negative.mismatches()
        ),
    );
}

/// Criterion 7a: the copying player is consistent with winning for the
/// game's own composite in all four catalog games, 100 samples each.
#[test]
fn criterion_7a_copy_strategy() {
    let games: Vec<(FrontEnd, &str)> = vec![
        (FrontEnd::Wadge, "lim"),
        (FrontEnd::Eraser, "lim"),
        (FrontEnd::Backtrack, "limdelta"),
        (FrontEnd::Tree { derivative_depth: 1, linear: false }, "linearize"),
    ];
    for (fe, sample_family) in games {
        let base = GameConfig::classic(fe, target("id").unwrap(), 100).unwrap();
        let cfg = GameConfig::generic(base.probe.clone(), base.operator.clone(), base.zt_target(), 100)
            .unwrap();
        for (i, p) in samples_for(sample_family, 7700, 100).iter().enumerate() {
            let mut ii = copy_strategy(false);
            let t = run_game(&cfg, p, ii.as_mut());
            assert_eq!(
                t.verdict,
                Verdict::WinConsistent,
                "{fe:?} sample {i}:\n{}",
                t.render()
            );
        }
    }
    pass("7a copy-strategy", "4 games x 100 samples".into());
}

/// Criterion 7b: witness-driven eraser play for the limit target over 200
/// samples at 500 rounds; every cell stable over the second half of the
/// run matches the exact limit.
#[test]
fn criterion_7b_eraser_witness_play() {
    let cfg = GameConfig::classic(FrontEnd::Eraser, target("lim").unwrap(), 500).unwrap();
    let w = identity_witness("lim", "lim");
    let builder = strategy_from_witness(&w, FrontEnd::Eraser).unwrap();
    for (i, p) in samples_for("lim", 7801, 200).iter().enumerate() {
        let mut ii = builder();
        let t = run_game(&cfg, p, ii.as_mut());
        assert_eq!(t.verdict, Verdict::WinConsistent, "sample {i}:\n{}", t.render());
        assert!(
            t.diagnostics.stable_cells_checked >= 1,
            "sample {i}: no settled cells\n{}",
            t.render()
        );
        assert_eq!(
            t.diagnostics.stable_cells_matching, t.diagnostics.stable_cells_checked,
            "sample {i}: settled cells disagree with the limit\n{}",
            t.render()
        );
    }
    pass("7b eraser-witness", "200 samples x 500 rounds, settled = limit".into());
}

/// Criterion 7c: one wrongly certified output symbol loses on every sample.
#[test]
fn criterion_7c_corrupted_strategy_loses() {
    let cfg = GameConfig::classic(FrontEnd::Eraser, target("lim").unwrap(), 200).unwrap();
    let w = identity_witness("lim", "lim");
    let builder = strategy_from_witness(&w, FrontEnd::Eraser).unwrap();
    let lim = oracle("lim").unwrap();
    for (i, p) in samples_for("lim", 7902, 100).iter().enumerate() {
        let truth = lim.evaluate(p).unwrap().query(0);
        let mut ii = wadge_core::games::with_corrupted_certificate(
            builder(),
            Certificate { position: 0, value: truth + 1 },
        );
        let t = run_game(&cfg, p, ii.as_mut());
        assert!(
            matches!(t.verdict, Verdict::LossWitnessed { .. }),
            "sample {i}:\n{}",
            t.render()
        );
    }
    pass("7c corrupted-strategy", "100 samples, all lost".into());
}

/// Follow the decoded partial tree along the target value's labels.
fn matched_depth(y: &Word, value: &Point) -> usize {
    let pt = match decode_prefix(y) {
        Ok(pt) => pt,
        Err(_) => return 0,
    };
    let mut depth = 0;
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    loop {
        let want = value.query(depth as u64);
        let mut next = Vec::new();
        for parent in &frontier {
            for (path, &label) in &pt.present {
                if path.len() == parent.len() + 1 && path.starts_with(parent) && label == want {
                    next.push(path.clone());
                }
            }
        }
        if next.is_empty() {
            return depth;
        }
        depth += 1;
        frontier = next;
    }
}

/// Criterion 8: the composed strategies for one- and two-limit targets stay
/// consistent over 200 scripted samples at 500 rounds, and the revealed
/// trees follow the exact target values.
#[test]
fn criterion_8_baire_class_games() {
    // Two limits: h ∘ par-isFinite ∘ k in the derivative game.
    let cfg2 = GameConfig::classic(
        FrontEnd::Tree { derivative_depth: 1, linear: false },
        target("baire2").unwrap(),
        500,
    )
    .unwrap();
    let f2 = target("baire2").unwrap();
    let mut followed2 = usize::MAX;
    for (i, p) in samples_for("lim", 8801, 200).iter().enumerate() {
        let mut ii = baire2_strategy(|v| v % 2, |v| v + 1, 16);
        let t = run_game(&cfg2, p, ii.as_mut());
        assert_eq!(t.verdict, Verdict::WinConsistent, "sample {i}:\n{}", t.render());
        let d = matched_depth(&t.y_prefix, &f2.evaluate(p).unwrap());
        assert!(d >= 1, "sample {i}: tree does not follow the target\n{}", t.render());
        followed2 = followed2.min(d);
    }
    // One limit: h ∘ lim in the linearization game.
    let cfg1 = GameConfig::classic(
        FrontEnd::Tree { derivative_depth: 0, linear: true },
        target("baire1").unwrap(),
        500,
    )
    .unwrap();
    let f1 = target("baire1").unwrap();
    let mut followed1 = usize::MAX;
    for (i, p) in samples_for("lim", 8802, 200).iter().enumerate() {
        let mut ii = baire1_strategy(|v| v, |v| v + 1);
        let t = run_game(&cfg1, p, ii.as_mut());
        assert_eq!(t.verdict, Verdict::WinConsistent, "sample {i}:\n{}", t.render());
        let d = matched_depth(&t.y_prefix, &f1.evaluate(p).unwrap());
        assert!(d >= 2, "sample {i}: tree follows only to depth {d}\n{}", t.render());
        followed1 = followed1.min(d);
    }
    pass(
        "8 baire-class-games",
        format!(
            "200+200 samples x 500 rounds; trees follow targets to depth >= {followed2}/{followed1}"
        ),
    );
}

/// Criterion 9: packaging a witness-derived strategy back into a witness
/// reproduces the original on 50 samples, exactly.
#[test]
fn criterion_9_strategy_witness_roundtrip() {
    // Identity witnesses in the code-copying games: outputs must agree
    // symbol for symbol to depth 10.
    for (oracle_name, family) in [("id", "any"), ("lim", "lim")] {
        let cfg = GameConfig::generic(
            wadge_core::games::ProbeSpec::id(),
            oracle(oracle_name).unwrap(),
            target(if oracle_name == "id" { "id" } else { "lim" }).unwrap(),
            50,
        )
        .unwrap();
        let w = identity_witness(oracle_name, oracle_name);
        let builder = strategy_from_witness(&w, FrontEnd::Generic).unwrap();
        let rt = witness_from_strategy(builder, &cfg);
        for (i, p) in samples_for(family, 9900, 50).iter().enumerate() {
            let a = run_pre_machine(&w, p, 10, 400).unwrap();
            let b = run_pre_machine(&rt, p, 10, 400).unwrap();
            assert!(a.len() >= 10 && b.len() >= 10, "sample {i} starved");
            assert_eq!(
                a.symbols()[..10],
                b.symbols()[..10],
                "roundtrip drifted ({oracle_name}, sample {i})"
            );
        }
    }
    // Tree-building witnesses: the replayed strategy re-slots the same
    // growing tree at its own pace, so the runs must mutually contain each
    // other's label paths given a longer horizon on the other side.
    fn label_words(w: &Word) -> BTreeSet<Vec<u64>> {
        let t = decode_prefix(w).unwrap().to_finite_tree();
        let mut out = BTreeSet::new();
        for (path, _) in t.nodes() {
            let labels: Vec<u64> = (1..=path.len())
                .map(|d| t.label(&path[..d]).unwrap())
                .collect();
            out.insert(labels);
        }
        out
    }
    for (name, family, fe) in [
        (
            "lim≤Linearize",
            "lim",
            FrontEnd::Tree { derivative_depth: 0, linear: true },
        ),
        (
            "isFinite≤TD",
            "isfinite",
            FrontEnd::Tree { derivative_depth: 1, linear: false },
        ),
    ] {
        let w = wadge_core::weihrauch::build_witness(name).unwrap();
        let cfg = GameConfig::classic(fe, target("id").unwrap(), 50).unwrap();
        let builder = strategy_from_witness(&w, fe).unwrap();
        let rt = witness_from_strategy(builder, &cfg);
        for (i, p) in samples_for(family, 9901, 50).iter().enumerate() {
            // Unbounded wants: the fuel (input length) sets the horizon.
            let huge = usize::MAX / 2;
            let a_short = label_words(&run_pre_machine(&w, p, huge, 400).unwrap());
            let a_long = label_words(&run_pre_machine(&w, p, huge, 4000).unwrap());
            let b_short = label_words(&run_pre_machine(&rt, p, huge, 400).unwrap());
            let b_long = label_words(&run_pre_machine(&rt, p, huge, 4000).unwrap());
            assert!(
                a_short.is_subset(&b_long),
                "{name} sample {i}: replay misses {:?}",
                a_short.difference(&b_long).next()
            );
            assert!(
                b_short.is_subset(&a_long),
                "{name} sample {i}: replay invents {:?}",
                b_short.difference(&a_long).next()
            );
            assert!(!b_short.is_empty(), "{name} sample {i}: replay built nothing");
        }
    }
    pass("9 strategy-witness-roundtrip", "4 witnesses x 50 samples".into());
}
