//! Exact desk-scale evaluators for the limit-style operators: pointwise
//! column limits, the eventually-constant-columns restriction, the
//! finiteness test on bit streams, and columnwise parallel application.
//!
//! None of these operators is continuous, so evaluation demands a finite
//! certificate of membership in the domain. The certificate is the
//! presentation itself: column tables are eventually their default column,
//! eventually periodic points stabilize within a computable window, and
//! tree codes have finitely many live root columns.

mod derivative;
mod guess;

pub use derivative::{
    chain_tree, ind_label, ind_label_machine, ind_label_up_word, linearize, prune_derivative,
    prune_derivative_realizer,
};
pub use guess::{guess_word, stage_tree};

use crate::error::OpError;
use crate::point::{column_of, Point, Provenance};
use crate::trees::{code_path, UpWord};
use crate::words::pair;

/// The pointwise limit of the columns of `p`, when the presentation
/// certifies convergence.
pub fn lim_eval(p: &Point) -> Result<Point, OpError> {
    match p {
        // Columns beyond the table are literally the default column.
        Point::Columns { default, .. } => Ok((**default).clone()),
        // Columns are eventually the constant tail.
        Point::Literal { tail, .. } => Ok(Point::constant(*tail)),
        Point::EventuallyPeriodic { preamble, period } => {
            let plen = period.len() as u64;
            let cycle = 2 * plen;
            let mut limit = Vec::new();
            for k in 0..cycle {
                limit.push(column_limit_of_ep(p, preamble.len() as u64, cycle, k)?);
            }
            Ok(Point::eventually_periodic(vec![], limit).expect("cycle nonempty"))
        }
        // Finitely many live root columns; the rest are zero.
        Point::TreeCode(_) => Ok(Point::zero()),
        Point::Derived { provenance, .. } => match provenance.as_ref() {
            Provenance::CylLimImage { base } => {
                let inner = lim_eval(base)?;
                Ok(Point::pair_points((**base).clone(), inner))
            }
            Provenance::GuessColumns { rep } => {
                let tree = rep.to_regular();
                let label = linearize_label(&tree)?;
                // Guard: every guess computable at desk scale must be a
                // prefix of the limit. Code cell positions grow so fast that
                // small stages only ever see short guesses; the limit itself
                // is read off the presentation.
                let code = Point::TreeCode(rep.clone());
                for n in 0..12u64 {
                    let g = guess_word(&code.prefix(n as usize), n, n)
                        .map_err(|e| OpError::NotInDomain(e.to_string()))?;
                    for (j, &sym) in g.symbols().iter().enumerate() {
                        if sym != label.query(j as u64) {
                            return Err(OpError::NotInDomain(format!(
                                "guess at stage {n} contradicts the limit at {j}"
                            )));
                        }
                    }
                }
                Ok(up_word_point(&label))
            }
            _ => Err(OpError::NotInDomain(
                "derived point carries no convergence certificate".into(),
            )),
        },
    }
}

/// `lim` iterated `n` times; `n = 0` is the identity.
pub fn lim_iter(n: u32, p: &Point) -> Result<Point, OpError> {
    let mut cur = p.clone();
    for _ in 0..n {
        cur = lim_eval(&cur)?;
    }
    Ok(cur)
}

/// Limit value at cell `k` of an eventually periodic point, requiring the
/// column values to be eventually constant in the column index.
fn column_limit_of_ep(p: &Point, pre_len: u64, cycle: u64, k: u64) -> Result<u64, OpError> {
    let mut n0 = 0u64;
    while pair(n0, k) < pre_len {
        n0 += 1;
    }
    let first = p.query(pair(n0, k));
    for n in n0..n0 + cycle {
        if p.query(pair(n, k)) != first {
            return Err(OpError::NotInDomain(format!(
                "columns do not converge pointwise at cell {k}"
            )));
        }
    }
    Ok(first)
}

/// The common eventual column, defined when all but finitely many columns
/// are equal (certified by the presentation).
pub fn lim_delta_eval(p: &Point) -> Result<Point, OpError> {
    match p {
        Point::Columns { default, .. } => Ok((**default).clone()),
        Point::Literal { tail, .. } => Ok(Point::constant(*tail)),
        Point::TreeCode(_) => Ok(Point::zero()),
        Point::EventuallyPeriodic { preamble, period } => {
            let plen = period.len() as u64;
            let cycle = 2 * plen;
            // Columns with index >= n0 lie entirely in the periodic region
            // and repeat with period `cycle`; they must all be equal.
            let mut n0 = 0u64;
            while pair(n0, 0) < preamble.len() as u64 {
                n0 += 1;
            }
            let reference = column_of(p, n0);
            for n in n0 + 1..n0 + cycle {
                let c = column_of(p, n);
                let bound = ep_compare_bound(&reference, &c);
                for j in 0..bound {
                    if reference.query(j) != c.query(j) {
                        return Err(OpError::NotInDomain(format!(
                            "columns {n0} and {n} differ at cell {j}"
                        )));
                    }
                }
            }
            Ok(reference)
        }
        Point::Derived { .. } => Err(OpError::NotInDomain(
            "derived point carries no eventual-constancy certificate".into(),
        )),
    }
}

/// Positions that decide stream equality of two eventually periodic points.
fn ep_compare_bound(a: &Point, b: &Point) -> u64 {
    fn parts(p: &Point) -> (u64, u64) {
        match p {
            Point::EventuallyPeriodic { preamble, period } => {
                (preamble.len() as u64, period.len() as u64)
            }
            Point::Literal { word, .. } => (word.len() as u64, 1),
            _ => (0, 1),
        }
    }
    let (pa, la) = parts(a);
    let (pb, lb) = parts(b);
    let gcd = {
        let (mut x, mut y) = (la, lb);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    pa.max(pb) + la / gcd * lb
}

/// 1 when the set of 1-positions of a bit stream is finite, 0 otherwise.
/// The stream must be presented as a literal or eventually periodic point.
pub fn is_finite_eval(p: &Point) -> Result<u64, OpError> {
    match p {
        Point::Literal { word, tail } => {
            check_binary(word.symbols(), 0)?;
            if *tail > 1 {
                return Err(OpError::NonBinary {
                    position: word.len() as u64,
                    value: *tail,
                });
            }
            Ok(if *tail == 1 { 0 } else { 1 })
        }
        Point::EventuallyPeriodic { preamble, period } => {
            check_binary(preamble.symbols(), 0)?;
            check_binary(period.symbols(), preamble.len() as u64)?;
            Ok(if period.symbols().contains(&1) { 0 } else { 1 })
        }
        _ => Err(OpError::NotInDomain(
            "finiteness needs a literal or eventually periodic bit stream".into(),
        )),
    }
}

fn check_binary(symbols: &[u64], offset: u64) -> Result<(), OpError> {
    for (i, &v) in symbols.iter().enumerate() {
        if v > 1 {
            return Err(OpError::NonBinary {
                position: offset + i as u64,
                value: v,
            });
        }
    }
    Ok(())
}

/// Operators that can be applied columnwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnOp {
    Identity,
    IsFinite,
    Lim,
    LimDelta,
}

/// Applies `op` to every column: column `n` of the result is `op((p)_n)`.
/// For the bit-valued finiteness test the result is the plain bit stream
/// `n ↦ op((p)_n)`.
pub fn parallel_apply(op: ColumnOp, p: &Point) -> Result<Point, OpError> {
    match op {
        ColumnOp::Identity => Ok(p.clone()),
        ColumnOp::IsFinite => parallel_is_finite(p),
        ColumnOp::Lim | ColumnOp::LimDelta => {
            let eval = |q: &Point| match op {
                ColumnOp::Lim => lim_eval(q),
                _ => lim_delta_eval(q),
            };
            match p {
                Point::Columns { columns, default } => {
                    let cols = columns
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            eval(c).map_err(|e| OpError::ColumnNotInDomain {
                                index: i as u64,
                                reason: e.to_string(),
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let d = eval(default).map_err(|e| OpError::ColumnNotInDomain {
                        index: columns.len() as u64,
                        reason: e.to_string(),
                    })?;
                    Ok(Point::columns(cols, d))
                }
                _ => Err(OpError::NotInDomain(
                    "columnwise limits need a column table".into(),
                )),
            }
        }
    }
}

fn parallel_is_finite(p: &Point) -> Result<Point, OpError> {
    match p {
        Point::Columns { columns, default } => {
            let mut bits = Vec::new();
            for (i, c) in columns.iter().enumerate() {
                let b = is_finite_eval(c).map_err(|e| OpError::ColumnNotInDomain {
                    index: i as u64,
                    reason: e.to_string(),
                })?;
                bits.push(b);
            }
            let d = is_finite_eval(default).map_err(|e| OpError::ColumnNotInDomain {
                index: columns.len() as u64,
                reason: e.to_string(),
            })?;
            Ok(Point::literal(bits, d))
        }
        Point::Literal { .. } | Point::EventuallyPeriodic { .. } => {
            let cycle = match p {
                Point::EventuallyPeriodic { period, .. } => 2 * period.len() as u64,
                _ => 1,
            };
            let mut bits = Vec::new();
            for n in 0..cycle {
                let c = column_of(p, n);
                let b = is_finite_eval(&c).map_err(|e| OpError::ColumnNotInDomain {
                    index: n,
                    reason: e.to_string(),
                })?;
                bits.push(b);
            }
            Ok(Point::eventually_periodic(vec![], bits).expect("cycle nonempty"))
        }
        Point::Derived { provenance, .. } => match provenance.as_ref() {
            Provenance::HeightBits { rep } => {
                let tree = rep.to_regular();
                let infinite = tree.vertices_with_infinite_height();
                let root = tree.root();
                let rep = rep.clone();
                Ok(Point::derived(
                    "per-node finiteness bits",
                    Provenance::Opaque,
                    move |n| {
                        // Column 0 stands for the root; column n + 1 for the
                        // node at code path n.
                        let vertex = if n == 0 {
                            root
                        } else {
                            rep.resolve_regular(&code_path(n - 1))
                        };
                        match vertex {
                            Some(v) if infinite.contains(&v) => 0,
                            _ => 1,
                        }
                    },
                ))
            }
            _ => Err(OpError::NotInDomain(
                "derived point carries no columnwise certificate".into(),
            )),
        },
        _ => Err(OpError::NotInDomain(
            "parallel finiteness needs a table, literal, or periodic point".into(),
        )),
    }
}

/// An eventually periodic word as a point.
pub fn up_word_point(w: &UpWord) -> Point {
    Point::eventually_periodic(w.preamble.0.clone(), w.period.0.clone())
        .expect("up-word period nonempty")
}

/// The unique infinite induced label of the linearization, as an
/// eventually periodic word.
pub fn linearize_label(t: &crate::trees::RegularTree) -> Result<UpWord, OpError> {
    let lin = linearize(t)?;
    ind_label_up_word(&lin).ok_or_else(|| OpError::NotInDomain("empty body".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::interleave;

    #[test]
    fn lim_of_constant_columns() {
        let q = Point::eventually_periodic(vec![4], vec![2, 7]).unwrap();
        let p = Point::columns(vec![q.clone(), q.clone()], q.clone());
        let l = lim_eval(&p).unwrap();
        assert_eq!(l.prefix(64), q.prefix(64));
    }

    #[test]
    fn lim_of_shifting_columns_is_zero() {
        // Column n is 0^n followed by 1s; the pointwise limit is all zero.
        let cols: Vec<Point> = (0..6)
            .map(|n| Point::literal(vec![0; n], 1))
            .collect();
        let p = Point::columns(cols, Point::zero());
        let l = lim_eval(&p).unwrap();
        assert_eq!(l.prefix(32), Point::zero().prefix(32));
    }

    #[test]
    fn lim_rejects_alternating_columns() {
        // The point i -> i mod 2 has no pointwise column limit.
        let p = Point::eventually_periodic(vec![], vec![0, 1]).unwrap();
        assert!(matches!(lim_eval(&p), Err(OpError::NotInDomain(_))));
    }

    #[test]
    fn lim_of_ep_matches_brute_force() {
        // All-constant periodic point converges to that constant.
        let p = Point::eventually_periodic(vec![9, 9, 3], vec![5]).unwrap();
        let l = lim_eval(&p).unwrap();
        for k in 0..40u64 {
            // brute force: sample far columns
            let far = p.query(pair(1000 + k, k));
            assert_eq!(l.query(k), far);
        }
    }

    #[test]
    fn lim_iter_zero_is_identity() {
        let p = Point::literal(vec![3, 1, 4], 0);
        let r = lim_iter(0, &p).unwrap();
        assert_eq!(r.prefix(16), p.prefix(16));
    }

    #[test]
    fn lim_delta_table() {
        let q0 = Point::constant(3);
        let q1 = Point::literal(vec![8], 0);
        let q = Point::eventually_periodic(vec![], vec![1, 2]).unwrap();
        let p = Point::columns(vec![q0, q1], q.clone());
        let r = lim_delta_eval(&p).unwrap();
        assert_eq!(r.prefix(32), q.prefix(32));
    }

    #[test]
    fn lim_delta_rejects_alternating() {
        let p = Point::eventually_periodic(vec![], vec![0, 1]).unwrap();
        assert!(lim_delta_eval(&p).is_err());
    }

    #[test]
    fn lim_delta_all_equal() {
        let q = Point::constant(4);
        let p = Point::columns(vec![q.clone(), q.clone(), q.clone()], q.clone());
        assert_eq!(lim_delta_eval(&p).unwrap().prefix(8), q.prefix(8));
    }

    #[test]
    fn lim_delta_agrees_with_lim_when_defined() {
        let points = vec![
            Point::columns(vec![Point::constant(2)], Point::literal(vec![7], 1)),
            Point::literal(vec![5, 5, 5, 1], 2),
            Point::eventually_periodic(vec![3], vec![4]).unwrap(),
        ];
        for p in points {
            if let Ok(d) = lim_delta_eval(&p) {
                let l = lim_eval(&p).unwrap();
                assert_eq!(d.prefix(48), l.prefix(48));
            }
        }
    }

    #[test]
    fn is_finite_examples() {
        let a = Point::eventually_periodic(vec![1, 1, 0], vec![0]).unwrap();
        assert_eq!(is_finite_eval(&a).unwrap(), 1);
        let b = Point::eventually_periodic(vec![], vec![0, 1]).unwrap();
        assert_eq!(is_finite_eval(&b).unwrap(), 0);
        let c = Point::constant(1);
        assert_eq!(is_finite_eval(&c).unwrap(), 0);
        let d = Point::literal(vec![0, 2], 0);
        assert!(matches!(
            is_finite_eval(&d),
            Err(OpError::NonBinary { position: 1, value: 2 })
        ));
    }

    #[test]
    fn parallel_is_finite_table() {
        let finite = Point::literal(vec![1, 1], 0);
        let cofinal = Point::constant(1);
        let p = interleave(vec![finite, cofinal], Point::zero());
        let bits = parallel_apply(ColumnOp::IsFinite, &p).unwrap();
        assert_eq!(bits.query(0), 1);
        assert_eq!(bits.query(1), 0);
        assert_eq!(bits.query(2), 1);
        assert_eq!(bits.query(17), 1);
    }

    #[test]
    fn parallel_identity() {
        let p = Point::literal(vec![9, 1], 4);
        let r = parallel_apply(ColumnOp::Identity, &p).unwrap();
        assert_eq!(r.prefix(32), p.prefix(32));
    }

    #[test]
    fn parallel_is_finite_reports_offending_column() {
        let bad = Point::constant(5);
        let p = interleave(vec![bad], Point::zero());
        match parallel_apply(ColumnOp::IsFinite, &p) {
            Err(OpError::ColumnNotInDomain { index: 0, .. }) => {}
            other => panic!("expected column error, got {other:?}"),
        }
    }

    #[test]
    fn parallel_is_finite_on_ep_matches_columns() {
        let p = Point::eventually_periodic(vec![1, 0, 1], vec![0, 1, 0, 0]).unwrap();
        let bits = parallel_apply(ColumnOp::IsFinite, &p).unwrap();
        for n in 0..12 {
            let col = column_of(&p, n);
            assert_eq!(bits.query(n), is_finite_eval(&col).unwrap(), "column {n}");
        }
    }
}
