//! Game-level behavior: copy strategies, witness-driven play, the tree
//! strategies for limit targets, and strategy/witness roundtrips.

use wadge_core::games::{
    baire1_strategy, baire2_strategy, copy_strategy, run_game, strategy_from_witness, target,
    tree_operator, witness_from_strategy, Certificate, FrontEnd, GameConfig, ProbeSpec, Verdict,
};
use wadge_core::ops;
use wadge_core::point::Point;
use wadge_core::trees::decode_prefix;
use wadge_core::weihrauch::{identity_witness, oracle, samples_for};
use wadge_core::words::Word;

fn wadge_cfg(rounds: usize) -> GameConfig {
    GameConfig::classic(FrontEnd::Wadge, target("id").unwrap(), rounds).unwrap()
}

#[test]
fn wadge_copy_wins_consistently() {
    let cfg = wadge_cfg(50);
    let p = Point::eventually_periodic(vec![4, 2], vec![9, 1, 5]).unwrap();
    let mut ii = copy_strategy(true);
    let t = run_game(&cfg, &p, ii.as_mut());
    assert_eq!(t.verdict, Verdict::WinConsistent, "{}", t.render());
    // y trails x by one round of lag at most.
    assert!(t.y_prefix.len() >= t.x_prefix.len() - 1);
    assert!(t.y_prefix.is_prefix_of(&t.x_prefix));
}

#[test]
fn copy_wins_in_all_four_catalog_games() {
    // The generic copying player against the composite target of each game.
    let games: Vec<(FrontEnd, Vec<Point>)> = vec![
        (FrontEnd::Wadge, samples_for("lim", 1, 5)),
        (FrontEnd::Eraser, samples_for("lim", 2, 5)),
        (FrontEnd::Backtrack, samples_for("limdelta", 3, 5)),
        (
            FrontEnd::Tree { derivative_depth: 1, linear: false },
            samples_for("linearize", 4, 5),
        ),
    ];
    for (fe, samples) in games {
        let base = GameConfig::classic(fe, target("id").unwrap(), 60).unwrap();
        let cfg = GameConfig::generic(
            base.probe.clone(),
            base.operator.clone(),
            base.zt_target(),
            60,
        )
        .unwrap();
        for p in &samples {
            let mut ii = copy_strategy(false);
            let t = run_game(&cfg, p, ii.as_mut());
            assert_eq!(
                t.verdict,
                Verdict::WinConsistent,
                "front end {fe:?}:\n{}",
                t.render()
            );
        }
    }
}

#[test]
fn eraser_witness_play_converges_to_the_limit() {
    let cfg = GameConfig::classic(FrontEnd::Eraser, target("lim").unwrap(), 400).unwrap();
    let w = identity_witness("lim", "lim");
    let builder = strategy_from_witness(&w, FrontEnd::Eraser).unwrap();
    for p in samples_for("lim", 11, 10) {
        let mut ii = builder();
        let t = run_game(&cfg, &p, ii.as_mut());
        assert_eq!(t.verdict, Verdict::WinConsistent, "{}", t.render());
        // Cells stable over the second half of the run agree with the limit.
        assert!(
            t.diagnostics.stable_cells_checked >= 2,
            "too few stable cells:\n{}",
            t.render()
        );
        assert_eq!(
            t.diagnostics.stable_cells_matching, t.diagnostics.stable_cells_checked,
            "stable tape cells disagree with the exact limit:\n{}",
            t.render()
        );
    }
}

#[test]
fn corrupted_certificate_loses() {
    let cfg = GameConfig::classic(FrontEnd::Eraser, target("lim").unwrap(), 100).unwrap();
    let w = identity_witness("lim", "lim");
    let builder = strategy_from_witness(&w, FrontEnd::Eraser).unwrap();
    let samples = samples_for("lim", 13, 8);
    let lim = oracle("lim").unwrap();
    for p in &samples {
        let truth = lim.evaluate(p).unwrap().query(0);
        let mut ii = wadge_core::games::with_corrupted_certificate(
            builder(),
            Certificate {
                position: 0,
                value: truth + 1,
            },
        );
        let t = run_game(&cfg, p, ii.as_mut());
        assert!(
            matches!(t.verdict, Verdict::LossWitnessed { .. }),
            "{}",
            t.render()
        );
    }
}

#[test]
fn loss_is_monotone_in_the_budget() {
    let w = identity_witness("lim", "lim");
    let builder = strategy_from_witness(&w, FrontEnd::Eraser).unwrap();
    let p = samples_for("lim", 29, 1).remove(0);
    let lim = oracle("lim").unwrap();
    let truth = lim.evaluate(&p).unwrap().query(0);
    for rounds in [50usize, 100, 200, 400] {
        let cfg = GameConfig::classic(FrontEnd::Eraser, target("lim").unwrap(), rounds).unwrap();
        let mut ii = wadge_core::games::with_corrupted_certificate(
            builder(),
            Certificate {
                position: 0,
                value: truth + 1,
            },
        );
        let t = run_game(&cfg, &p, ii.as_mut());
        assert!(matches!(t.verdict, Verdict::LossWitnessed { .. }));
    }
}

#[test]
fn silent_tail_is_undetermined() {
    struct Silent;
    impl wadge_core::games::StrategyII for Silent {
        fn next(&mut self, _i: u64) -> wadge_core::games::IiAction {
            wadge_core::games::IiAction::pass()
        }
    }
    let cfg = wadge_cfg(30);
    let p = Point::constant(1);
    let mut ii = Silent;
    let t = run_game(&cfg, &p, &mut ii);
    assert!(matches!(t.verdict, Verdict::Undetermined { .. }));
}

#[test]
fn out_of_domain_script_wins_by_default() {
    // The alternating point has no pointwise column limit.
    let cfg = GameConfig::classic(FrontEnd::Eraser, target("lim").unwrap(), 40).unwrap();
    let p = Point::eventually_periodic(vec![], vec![0, 1]).unwrap();
    let mut ii = copy_strategy(false);
    let t = run_game(&cfg, &p, ii.as_mut());
    assert_eq!(t.verdict, Verdict::WinConsistent);
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

#[test]
fn baire1_strategy_wins_the_linearize_game() {
    let cfg = GameConfig::classic(
        FrontEnd::Tree { derivative_depth: 0, linear: true },
        target("baire1").unwrap(),
        500,
    )
    .unwrap();
    let f = target("baire1").unwrap();
    for p in samples_for("lim", 31, 10) {
        let mut ii = baire1_strategy(|v| v, |v| v + 1);
        let t = run_game(&cfg, &p, ii.as_mut());
        assert_eq!(t.verdict, Verdict::WinConsistent, "{}", t.render());
        let value = f.evaluate(&p).unwrap();
        let d = matched_depth(&t.y_prefix, &value);
        assert!(
            d >= 2,
            "decoded tree follows the target only to depth {d}:\n{}",
            t.render()
        );
    }
}

#[test]
fn baire2_strategy_wins_the_derivative_game() {
    let cfg = GameConfig::classic(
        FrontEnd::Tree { derivative_depth: 1, linear: false },
        target("baire2").unwrap(),
        500,
    )
    .unwrap();
    let f = target("baire2").unwrap();
    for p in samples_for("lim", 37, 10) {
        let mut ii = baire2_strategy(|v| v % 2, |v| v + 1, 16);
        let t = run_game(&cfg, &p, ii.as_mut());
        assert_eq!(t.verdict, Verdict::WinConsistent, "{}", t.render());
        let value = f.evaluate(&p).unwrap();
        let d = matched_depth(&t.y_prefix, &value);
        assert!(
            d >= 1,
            "decoded tree follows the target only to depth {d}:\n{}",
            t.render()
        );
    }
}

#[test]
fn strategy_witness_roundtrip_on_the_wadge_game() {
    let cfg = wadge_cfg(40);
    let w = identity_witness("id", "id");
    let builder = strategy_from_witness(&w, FrontEnd::Generic).unwrap();
    let rt = witness_from_strategy(builder, &cfg);
    // The roundtripped pre-machine reproduces the original pre-machine's
    // stream on samples.
    for p in samples_for("any", 43, 10) {
        let a = wadge_core::weihrauch::run_pre_machine(&w, &p, 10, 200).unwrap();
        let b = wadge_core::weihrauch::run_pre_machine(&rt, &p, 10, 200).unwrap();
        let n = a.len().min(b.len());
        assert!(n >= 10, "too little output: {} vs {}", a.len(), b.len());
        assert_eq!(
            a.symbols()[..n],
            b.symbols()[..n],
            "roundtrip drifted on {p:?}"
        );
    }
}

#[test]
fn copy_roundtrip_realizes_the_game_composite() {
    // Packaging the copy strategy as a witness yields a realizer of the
    // game's own composite: probe(operator(x)).
    let base = GameConfig::classic(
        FrontEnd::Tree { derivative_depth: 1, linear: false },
        target("id").unwrap(),
        80,
    )
    .unwrap();
    let cfg = GameConfig::generic(
        ProbeSpec::ind_label(),
        tree_operator(1, false),
        base.zt_target(),
        80,
    )
    .unwrap();
    let builder: wadge_core::games::StrategyBuilder =
        std::sync::Arc::new(|| copy_strategy(false));
    let rt = witness_from_strategy(builder, &cfg);
    let zt = cfg.zt_target();
    let td1 = tree_operator(1, false);
    for p in samples_for("linearize", 47, 6) {
        // The packaged pre-machine echoes the copied code; composing it
        // with the operator oracle and the probe machine reproduces the
        // composite target.
        let y = wadge_core::weihrauch::run_pre_machine(&rt, &p, 64, 64).unwrap();
        assert_eq!(y, p.prefix(y.len()), "copy-derived code should echo x");
        let value = zt.evaluate(&p).unwrap();
        let derived = td1.evaluate(&p).unwrap();
        let mut post = ops::ind_label_machine();
        let run = wadge_core::machine::run_machine_on_point(post.as_mut(), &derived, 3, 40_000);
        assert!(run.output.len() >= 3, "probe machine starved");
        assert_eq!(run.output.symbols()[..3], value.prefix(3).0[..3]);
    }
}

#[test]
fn pass_tail_shows_up_as_fuel_exhaustion_not_mismatch() {
    // A strategy that stops playing yields a finite-output machine.
    struct StopsAfter(usize);
    impl wadge_core::games::StrategyII for StopsAfter {
        fn next(&mut self, i: u64) -> wadge_core::games::IiAction {
            if self.0 == 0 {
                wadge_core::games::IiAction::pass()
            } else {
                self.0 -= 1;
                wadge_core::games::IiAction::mv(wadge_core::games::IiMove::Sym(i))
            }
        }
    }
    let cfg = wadge_cfg(40);
    let builder: wadge_core::games::StrategyBuilder =
        std::sync::Arc::new(|| Box::new(StopsAfter(4)));
    let rt = witness_from_strategy(builder, &cfg);
    let p = Point::constant(3);
    let out = wadge_core::weihrauch::run_pre_machine(&rt, &p, 10, 100).unwrap();
    assert_eq!(out.len(), 4);
    // A depth-10 comparison therefore reports exhaustion, not mismatch.
    let mut m = rt.pre_machine();
    let run = wadge_core::machine::run_machine_on_point(m.as_mut(), &p, 10, 100);
    assert!(run.output.len() < 10);
}
