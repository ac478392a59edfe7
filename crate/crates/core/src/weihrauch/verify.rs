//! Sample-based verification: witness application, tightening checks, and
//! the cylinder and transparency consequence checks.

use crate::error::WitnessError;
use crate::machine::run_machine_on_point;
use crate::ops;
use crate::point::Point;
use crate::sampling::Sampler;
use crate::trees::{bisimilar_exact, RegularTree};
use crate::words::Word;

use super::oracles::{oracle, OracleSpec};
use super::witnesses::{build_witness, CompareMode, ReductionWitness, WitnessForm};

pub const DEFAULT_FUEL: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleStatus {
    AgreeToDepth(usize),
    Mismatch { position: u64 },
    OracleDomainMiss(String),
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub title: String,
    pub depth: usize,
    pub samples: Vec<SampleStatus>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        !self
            .samples
            .iter()
            .any(|s| matches!(s, SampleStatus::Mismatch { .. }))
    }

    pub fn strict_pass(&self) -> bool {
        self.samples
            .iter()
            .all(|s| matches!(s, SampleStatus::AgreeToDepth(_)))
    }

    pub fn mismatches(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| matches!(s, SampleStatus::Mismatch { .. }))
            .count()
    }

    pub fn fuel_exhausted(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| matches!(s, SampleStatus::FuelExhausted))
            .count()
    }

    /// Line-oriented text: one sample per line, final PASS/FAIL line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.samples.iter().enumerate() {
            let line = match s {
                SampleStatus::AgreeToDepth(d) => format!("sample {i}: agree depth={d}"),
                SampleStatus::Mismatch { position } => {
                    format!("sample {i}: mismatch pos={position}")
                }
                SampleStatus::OracleDomainMiss(m) => {
                    format!("sample {i}: oracle-domain-miss ({m})")
                }
                SampleStatus::FuelExhausted => format!("sample {i}: fuel-exhausted"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        if self.pass() {
            out.push_str(&format!(
                "PASS {} ({} samples, depth {})\n",
                self.title,
                self.samples.len(),
                self.depth
            ));
        } else {
            out.push_str(&format!(
                "FAIL {} ({}/{} mismatched, depth {})\n",
                self.title,
                self.mismatches(),
                self.samples.len(),
                self.depth
            ));
        }
        out
    }
}

/// Evaluates the composite `post ∘ oracle ∘ pre` on `p` to at least `depth`
/// output symbols: the pre-image is taken symbolically, the oracle is
/// exact, and the post-processor runs symbolically when a shadow exists and
/// as a fuel-bounded machine otherwise.
pub fn apply_witness(
    w: &ReductionWitness,
    g: &OracleSpec,
    p: &Point,
    depth: usize,
    fuel: usize,
) -> Result<Word, WitnessError> {
    let answer = oracle_answer(w, g, p)?;
    if let Some(ps) = &w.post_shadow {
        let out = ps(p, &answer)?;
        return Ok(out.prefix(depth));
    }
    run_post_machine(w, p, &answer, depth, fuel)
}

/// The composite as a point, via the symbolic post-processor.
pub fn apply_witness_point(
    w: &ReductionWitness,
    g: &OracleSpec,
    p: &Point,
) -> Result<Point, WitnessError> {
    let answer = oracle_answer(w, g, p)?;
    match &w.post_shadow {
        Some(ps) => ps(p, &answer),
        None => Err(WitnessError::OracleDomainMiss(format!(
            "witness {} has no symbolic post-processor",
            w.name
        ))),
    }
}

fn oracle_answer(
    w: &ReductionWitness,
    g: &OracleSpec,
    p: &Point,
) -> Result<Point, WitnessError> {
    let pre = match &w.pre_shadow {
        Some(s) => s(p)?,
        None => {
            return Err(WitnessError::OracleDomainMiss(format!(
                "witness {} has no symbolic pre-image",
                w.name
            )))
        }
    };
    g.evaluate(&pre)
}

/// Runs the post-machine over the oracle answer (strong form) or the
/// pairing of input and answer (plain form).
pub fn run_post_machine(
    w: &ReductionWitness,
    p: &Point,
    answer: &Point,
    depth: usize,
    fuel: usize,
) -> Result<Word, WitnessError> {
    let post_input = match w.form {
        WitnessForm::Strong => answer.clone(),
        WitnessForm::Plain => Point::pair_points(p.clone(), answer.clone()),
    };
    let mut m = w.post_machine();
    let run = run_machine_on_point(m.as_mut(), &post_input, depth, fuel);
    if let Some(at) = run.rejected {
        return Err(WitnessError::Rejected { position: at });
    }
    if run.output.len() < depth {
        return Err(WitnessError::FuelExhausted {
            fed: fuel,
            produced: run.output.len(),
            wanted: depth,
        });
    }
    Ok(Word(run.output.symbols()[..depth].to_vec()))
}

/// Runs the pre-machine over the input point, gathering `want` output
/// symbols. Used by the machine/shadow agreement tests.
pub fn run_pre_machine(
    w: &ReductionWitness,
    p: &Point,
    want: usize,
    fuel: usize,
) -> Result<Word, WitnessError> {
    let mut m = w.pre_machine();
    let run = run_machine_on_point(m.as_mut(), p, want, fuel);
    if let Some(at) = run.rejected {
        return Err(WitnessError::Rejected { position: at });
    }
    Ok(run.output)
}

fn point_to_tree(p: &Point) -> Result<RegularTree, WitnessError> {
    match p {
        Point::TreeCode(rep) => Ok(rep.to_regular()),
        Point::Literal { word, tail }
            if *tail == 0 && word.symbols().iter().all(|&v| v == 0) =>
        {
            Ok(RegularTree::empty())
        }
        _ => Err(WitnessError::OracleDomainMiss(
            "output is not a presented tree code".into(),
        )),
    }
}

fn compare_sample(
    w: &ReductionWitness,
    g: &OracleSpec,
    target: &OracleSpec,
    p: &Point,
    depth: usize,
    fuel: usize,
) -> SampleStatus {
    let expected = match target.evaluate(p) {
        Ok(e) => e,
        Err(e) => return SampleStatus::OracleDomainMiss(format!("target: {e}")),
    };
    match w.compare {
        CompareMode::Prefix => {
            let got = match apply_witness(w, g, p, depth, fuel) {
                Ok(got) => got,
                Err(WitnessError::FuelExhausted { .. }) => return SampleStatus::FuelExhausted,
                Err(e) => return SampleStatus::OracleDomainMiss(e.to_string()),
            };
            let want = expected.prefix(depth);
            match got
                .symbols()
                .iter()
                .zip(want.symbols())
                .position(|(a, b)| a != b)
            {
                Some(i) => SampleStatus::Mismatch { position: i as u64 },
                None => SampleStatus::AgreeToDepth(depth),
            }
        }
        CompareMode::TreeBisim => {
            let got = match apply_witness_point(w, g, p) {
                Ok(got) => got,
                Err(e) => return SampleStatus::OracleDomainMiss(e.to_string()),
            };
            match (point_to_tree(&got), point_to_tree(&expected)) {
                (Ok(a), Ok(b)) => {
                    if bisimilar_exact(&a, &b) {
                        SampleStatus::AgreeToDepth(depth)
                    } else {
                        SampleStatus::Mismatch { position: 0 }
                    }
                }
                (Err(e), _) | (_, Err(e)) => SampleStatus::OracleDomainMiss(e.to_string()),
            }
        }
        CompareMode::ColumnsTreeBisim => {
            let got = match apply_witness_point(w, g, p) {
                Ok(got) => got,
                Err(e) => return SampleStatus::OracleDomainMiss(e.to_string()),
            };
            let width = match p {
                Point::Columns { columns, .. } => columns.len() as u64 + 1,
                _ => 4,
            };
            for n in 0..width {
                let a = match point_to_tree(&crate::point::column_of(&got, n)) {
                    Ok(t) => t,
                    Err(e) => return SampleStatus::OracleDomainMiss(e.to_string()),
                };
                let b = match point_to_tree(&crate::point::column_of(&expected, n)) {
                    Ok(t) => t,
                    Err(e) => return SampleStatus::OracleDomainMiss(e.to_string()),
                };
                if !bisimilar_exact(&a, &b) {
                    return SampleStatus::Mismatch { position: n };
                }
            }
            SampleStatus::AgreeToDepth(depth)
        }
    }
}

/// Verifies a catalog witness against its target's exact evaluator on the
/// given samples.
pub fn verify_witness(
    name: &str,
    samples: &[Point],
    depth: usize,
    fuel: usize,
) -> Result<VerificationReport, WitnessError> {
    let w = build_witness(name)?;
    verify_reduction(&w, samples, depth, fuel)
}

/// Verifies any witness value against its declared oracle and target.
pub fn verify_reduction(
    w: &ReductionWitness,
    samples: &[Point],
    depth: usize,
    fuel: usize,
) -> Result<VerificationReport, WitnessError> {
    let g = oracle(&w.oracle_name)
        .ok_or_else(|| WitnessError::UnknownWitness(w.oracle_name.clone()))?;
    let target = oracle(&w.target_name)
        .ok_or_else(|| WitnessError::UnknownWitness(w.target_name.clone()))?;
    let statuses = samples
        .iter()
        .map(|p| compare_sample(w, &g, &target, p, depth, fuel))
        .collect();
    Ok(VerificationReport {
        title: format!("witness {}", w.name),
        depth,
        samples: statuses,
    })
}

/// Checks that `f` tightens `g` on the samples: wherever `g` is defined,
/// `f` is defined and agrees to the output depth.
pub fn check_tightening(
    f: &OracleSpec,
    g: &OracleSpec,
    samples: &[Point],
    depth: usize,
) -> VerificationReport {
    let statuses = samples
        .iter()
        .map(|p| {
            let gv = match g.evaluate(p) {
                Ok(v) => v,
                Err(e) => return SampleStatus::OracleDomainMiss(format!("outside dom(g): {e}")),
            };
            let fv = match f.evaluate(p) {
                Ok(v) => v,
                // dom(g) must be contained in dom(f)
                Err(_) => return SampleStatus::Mismatch { position: 0 },
            };
            match (0..depth as u64).find(|&i| fv.query(i) != gv.query(i)) {
                Some(i) => SampleStatus::Mismatch { position: i },
                None => SampleStatus::AgreeToDepth(depth),
            }
        })
        .collect();
    VerificationReport {
        title: format!("tightening {} ⪯ {}", f.name, g.name),
        depth,
        samples: statuses,
    }
}

/// Verifies the cylinder witness of an operator: the composite around the
/// exact oracle must reproduce the pairing of the input with the oracle's
/// own answer, symbol for symbol.
pub fn cylinder_check(
    op_name: &str,
    samples: &[Point],
    depth: usize,
    fuel: usize,
) -> Result<VerificationReport, WitnessError> {
    let witness_name = match op_name {
        "td" => "cyl-TD",
        "lim" => "cyl-lim",
        "linearize" => "cyl-Linearize",
        other => return Err(WitnessError::UnknownWitness(format!("cylinder {other}"))),
    };
    let mut report = verify_witness(witness_name, samples, depth, fuel)?;
    report.title = format!("cylinder {op_name} via {witness_name}");
    Ok(report)
}

// ---------------------------------------------------------------------------
// Transparency consequence checks
// ---------------------------------------------------------------------------

/// Symbolic endomaps of operator codomains used by the transparency checks.
pub fn endomap(name: &str, p: &Point) -> Result<Point, WitnessError> {
    match name {
        "id" => Ok(p.clone()),
        "plus1" => Ok(value_map_point(p, &(std::sync::Arc::new(|v: u64| v + 1) as ValueFn))),
        "inc-labels" => {
            let rep = super::oracles::tree_rep(p);
            match rep {
                Ok(rep) => {
                    let t = rep.to_regular().map_labels(|l| l + 1);
                    if t.is_empty() {
                        Ok(Point::zero())
                    } else {
                        crate::trees::encode_tree_seeded(&t, rep.seed())
                            .map_err(|e| WitnessError::Op(e.into()))
                    }
                }
                Err(_) => match point_to_tree(p) {
                    Ok(t) if t.is_empty() => Ok(Point::zero()),
                    _ => Err(WitnessError::OracleDomainMiss(
                        "label increment needs a tree code".into(),
                    )),
                },
            }
        }
        "const-first-label" => {
            for k in 0..64 {
                let v = p.query(crate::words::pair(k, 0));
                if v != 0 {
                    return Ok(Point::constant(v - 1));
                }
            }
            Ok(Point::zero())
        }
        other => Err(WitnessError::UnknownWitness(format!("endomap {other}"))),
    }
}

type ValueFn = std::sync::Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// Applies a symbolwise map while keeping the presentation structured.
pub fn value_map_point(p: &Point, f: &ValueFn) -> Point {
    match p {
        Point::Literal { word, tail } => Point::literal(
            word.symbols().iter().map(|&v| f(v)).collect::<Vec<_>>(),
            f(*tail),
        ),
        Point::EventuallyPeriodic { preamble, period } => Point::eventually_periodic(
            preamble.symbols().iter().map(|&v| f(v)).collect::<Vec<_>>(),
            period.symbols().iter().map(|&v| f(v)).collect::<Vec<_>>(),
        )
        .expect("period stays nonempty"),
        Point::Columns { columns, default } => Point::columns(
            columns.iter().map(|c| value_map_point(c, f)).collect(),
            value_map_point(default, f),
        ),
        other => {
            let other = other.clone();
            let f = f.clone();
            Point::derived("value-mapped", crate::point::Provenance::Opaque, move |i| {
                f(other.query(i))
            })
        }
    }
}

/// Checks the transparency consequence `T(f(x)) = g(T(x))` for the named
/// operator and endomap pair on the samples. Tree-valued operators compare
/// by exact bisimilarity, stream-valued ones by prefix agreement.
pub fn transparency_check(
    op_name: &str,
    g_name: &str,
    f_name: &str,
    samples: &[Point],
    depth: usize,
) -> Result<VerificationReport, WitnessError> {
    let op = oracle(op_name)
        .ok_or_else(|| WitnessError::UnknownWitness(op_name.to_string()))?;
    let tree_valued = matches!(op_name, "td" | "linearize");
    let statuses = samples
        .iter()
        .map(|p| {
            let lhs = endomap(f_name, p).and_then(|fp| op.evaluate(&fp));
            let rhs = op.evaluate(p).and_then(|tp| endomap(g_name, &tp));
            let (lhs, rhs) = match (lhs, rhs) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    return SampleStatus::OracleDomainMiss(e.to_string())
                }
            };
            if tree_valued && g_name != "const-first-label" {
                match (point_to_tree(&lhs), point_to_tree(&rhs)) {
                    (Ok(a), Ok(b)) => {
                        if bisimilar_exact(&a, &b) {
                            SampleStatus::AgreeToDepth(depth)
                        } else {
                            SampleStatus::Mismatch { position: 0 }
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => SampleStatus::OracleDomainMiss(e.to_string()),
                }
            } else {
                match (0..depth as u64).find(|&i| lhs.query(i) != rhs.query(i)) {
                    Some(i) => SampleStatus::Mismatch { position: i },
                    None => SampleStatus::AgreeToDepth(depth),
                }
            }
        })
        .collect();
    Ok(VerificationReport {
        title: format!("transparency {op_name}: {g_name}∘{op_name} vs {op_name}∘{f_name}"),
        depth,
        samples: statuses,
    })
}

// ---------------------------------------------------------------------------
// Sample generation
// ---------------------------------------------------------------------------

/// Seeded in-domain samples for a witness or check family.
pub fn samples_for(name: &str, seed: u64, count: usize) -> Vec<Point> {
    let mut s = Sampler::new(seed);
    let empty_code = crate::trees::encode_tree_seeded(&RegularTree::empty(), 0)
        .expect("empty tree encodes");
    match name {
        "parTD≤TD" => (0..count)
            .map(|_| {
                let k = 1 + s.next_u64(3) as usize;
                let cols = (0..k)
                    .map(|_| {
                        crate::trees::encode_tree_seeded(&s.regular_tree(5, 3), 0)
                            .expect("sampled trees have edges")
                    })
                    .collect();
                Point::columns(cols, empty_code.clone())
            })
            .collect(),
        "TD≤parIsFinite" | "cyl-TD" | "td" => (0..count)
            .map(|_| {
                crate::trees::encode_tree_seeded(&s.regular_tree(6, 3), 0)
                    .expect("sampled trees have edges")
            })
            .collect(),
        "isFinite≤TD" | "isfinite" => (0..count).map(|_| s.bit_point()).collect(),
        "cyl-lim" | "lim≤Linearize" | "lim" => (0..count)
            .map(|_| loop {
                let p = if s.next_u64(2) == 0 {
                    s.column_table(3, 4)
                } else {
                    s.ep_point(4)
                };
                if ops::lim_eval(&p).is_ok() {
                    break p;
                }
            })
            .collect(),
        "Linearize≤lim" | "cyl-Linearize" | "linearize" => (0..count)
            .map(|_| {
                crate::trees::encode_tree_seeded(&s.proper_tree(4, 3), 0)
                    .expect("proper trees have edges")
            })
            .collect(),
        "limdelta" => (0..count).map(|_| s.column_table(3, 4)).collect(),
        _ => (0..count).map(|_| s.flat_point(4)).collect(),
    }
}
