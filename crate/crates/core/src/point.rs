//! Finitely presented points of Baire space.
//!
//! A point is an infinite sequence of naturals with a total, pure position
//! query. The public presentations (literal-plus-constant-tail, eventually
//! periodic, column table, tree code) all serialize to a one-document
//! textual format; derived points are internal wiring for exact operator
//! and oracle evaluation and have no textual form.

use crate::error::PointError;
use crate::trees::{FiniteTree, FiniteTreeDoc, RegularTree, RegularTreeDoc, TreeCodeRep};
use crate::words::{pair, unpair, Word};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Provenance of a derived point: enough structure for the exact oracle
/// evaluators to certify domains and compute values symbolically.
#[derive(Clone)]
pub enum Provenance {
    Opaque,
    /// Columns `⟨base, (base)_n⟩`; the pointwise limit is `⟨base, lim base⟩`.
    CylLimImage { base: Box<Point> },
    /// Columns `guess(n, n) ++ zeros` read off the code of a proper
    /// finitely branching tree.
    GuessColumns { rep: TreeCodeRep },
    /// Bit columns whose count of 1s equals the subtree height at the
    /// code-path node of the column index.
    HeightBits { rep: TreeCodeRep },
    /// Count-branch tree built from a bit stream.
    IsFiniteTree { bits: Box<Point> },
    /// Labels packed as `⟨1, l⟩` plus a code-carrying branch labeled
    /// `⟨0, p(n)⟩`.
    CylTdImage { rep: TreeCodeRep },
    /// Labels packed as `⟨l, p(depth-1)⟩` on a proper tree.
    CylLinearizeImage { rep: TreeCodeRep },
    /// Root child `n` carries the star of part `n` (empty beyond the list).
    StarCombined { parts: Vec<TreeCodeRep> },
    /// Per-column derivatives of a star-combined tree.
    TdOfStarCombined { parts: Vec<RegularTree> },
}

impl fmt::Debug for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Provenance::Opaque => "Opaque",
            Provenance::CylLimImage { .. } => "CylLimImage",
            Provenance::GuessColumns { .. } => "GuessColumns",
            Provenance::HeightBits { .. } => "HeightBits",
            Provenance::IsFiniteTree { .. } => "IsFiniteTree",
            Provenance::CylTdImage { .. } => "CylTdImage",
            Provenance::CylLinearizeImage { .. } => "CylLinearizeImage",
            Provenance::StarCombined { .. } => "StarCombined",
            Provenance::TdOfStarCombined { .. } => "TdOfStarCombined",
        };
        f.write_str(name)
    }
}

/// A finitely presented point of Baire space.
#[derive(Clone)]
pub enum Point {
    /// `word` followed by a constant tail.
    Literal { word: Word, tail: u64 },
    /// `preamble` followed by `period` repeated forever (period nonempty).
    EventuallyPeriodic { preamble: Word, period: Word },
    /// Column `n` is `columns[n]` when in range, else `default`.
    Columns {
        columns: Vec<Point>,
        default: Box<Point>,
    },
    /// Lazily evaluated tree code.
    TreeCode(TreeCodeRep),
    /// Internal: a pure total query with provenance.
    Derived {
        label: String,
        query: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
        provenance: Box<Provenance>,
    },
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Literal { word, tail } => write!(f, "Literal({word:?}, {tail}…)"),
            Point::EventuallyPeriodic { preamble, period } => {
                write!(f, "Ep({preamble:?}, {period:?}*)")
            }
            Point::Columns { columns, .. } => write!(f, "Columns[{}]", columns.len()),
            Point::TreeCode(rep) => write!(f, "TreeCode(seed {})", rep.seed()),
            Point::Derived { label, provenance, .. } => {
                write!(f, "Derived({label}, {provenance:?})")
            }
        }
    }
}

impl Point {
    pub fn literal(word: impl Into<Word>, tail: u64) -> Point {
        Point::Literal {
            word: word.into(),
            tail,
        }
    }

    pub fn zero() -> Point {
        Point::literal(vec![], 0)
    }

    pub fn constant(v: u64) -> Point {
        Point::literal(vec![], v)
    }

    pub fn eventually_periodic(
        preamble: impl Into<Word>,
        period: impl Into<Word>,
    ) -> Result<Point, PointError> {
        let period = period.into();
        if period.is_empty() {
            return Err(PointError::EmptyPeriod);
        }
        Ok(Point::EventuallyPeriodic {
            preamble: preamble.into(),
            period,
        })
    }

    pub fn columns(columns: Vec<Point>, default: Point) -> Point {
        Point::Columns {
            columns,
            default: Box::new(default),
        }
    }

    pub fn derived(
        label: impl Into<String>,
        provenance: Provenance,
        query: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Point {
        Point::Derived {
            label: label.into(),
            query: Arc::new(query),
            provenance: Box::new(provenance),
        }
    }

    pub fn query(&self, i: u64) -> u64 {
        match self {
            Point::Literal { word, tail } => word.get(i as usize).unwrap_or(*tail),
            Point::EventuallyPeriodic { preamble, period } => {
                let pre = preamble.len() as u64;
                if i < pre {
                    preamble.get(i as usize).unwrap()
                } else {
                    let j = (i - pre) % period.len() as u64;
                    period.get(j as usize).unwrap()
                }
            }
            Point::Columns { columns, default } => {
                let (n, k) = unpair(i);
                match columns.get(n as usize) {
                    Some(c) => c.query(k),
                    None => default.query(k),
                }
            }
            Point::TreeCode(rep) => rep.query(i),
            Point::Derived { query, .. } => query(i),
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n as u64).map(|i| self.query(i)).collect())
    }

    pub fn provenance(&self) -> &Provenance {
        match self {
            Point::Derived { provenance, .. } => provenance,
            _ => &Provenance::Opaque,
        }
    }

    /// The pair `⟨a, b⟩`: column 0 is `a`, column 1 is `b`, the rest zero.
    pub fn pair_points(a: Point, b: Point) -> Point {
        Point::columns(vec![a, b], Point::zero())
    }
}

/// Column `n` of `p`, with a presentation that stays finitely described:
/// column tables are looked up, literal and eventually periodic points
/// yield presentations of the same kind, and tree codes yield a derived
/// view of the code.
pub fn column_of(p: &Point, n: u64) -> Point {
    match p {
        Point::Columns { columns, default } => columns
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| (**default).clone()),
        Point::Literal { word, tail } => {
            let mut vals = Vec::new();
            let mut k = 0u64;
            loop {
                let pos = pair(n, k);
                if pos >= word.len() as u64 {
                    break;
                }
                vals.push(word.get(pos as usize).unwrap());
                k += 1;
            }
            Point::literal(vals, *tail)
        }
        Point::EventuallyPeriodic { preamble, period } => {
            let plen = period.len() as u64;
            let cycle = 2 * plen;
            // First k with pair(n, k) in the periodic region.
            let mut k0 = 0u64;
            while pair(n, k0) < preamble.len() as u64 {
                k0 += 1;
            }
            let pre: Vec<u64> = (0..k0).map(|k| p.query(pair(n, k))).collect();
            let per: Vec<u64> = (k0..k0 + cycle).map(|k| p.query(pair(n, k))).collect();
            Point::eventually_periodic(pre, per).expect("cycle is nonempty")
        }
        other => {
            let other = other.clone();
            Point::derived(format!("column {n}"), Provenance::Opaque, move |k| {
                other.query(pair(n, k))
            })
        }
    }
}

/// Inverse of [`column_of`] for finitely described column families.
pub fn interleave(columns: Vec<Point>, default: Point) -> Point {
    Point::columns(columns, default)
}

// ---------------------------------------------------------------------------
// Textual format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum PointDoc {
    #[serde(rename = "lit")]
    Lit { word: Vec<u64>, tail: u64 },
    #[serde(rename = "ep")]
    Ep { preamble: Vec<u64>, period: Vec<u64> },
    #[serde(rename = "cols")]
    Cols {
        columns: Vec<PointDoc>,
        default: Box<PointDoc>,
    },
    #[serde(rename = "tree")]
    Tree { tree: RegularTreeDoc, seed: u64 },
    #[serde(rename = "ftree")]
    FTree { tree: FiniteTreeDoc },
}

impl Point {
    fn to_doc(&self) -> Result<PointDoc, PointError> {
        Ok(match self {
            Point::Literal { word, tail } => PointDoc::Lit {
                word: word.0.clone(),
                tail: *tail,
            },
            Point::EventuallyPeriodic { preamble, period } => PointDoc::Ep {
                preamble: preamble.0.clone(),
                period: period.0.clone(),
            },
            Point::Columns { columns, default } => PointDoc::Cols {
                columns: columns
                    .iter()
                    .map(|c| c.to_doc())
                    .collect::<Result<_, _>>()?,
                default: Box::new(default.to_doc()?),
            },
            Point::TreeCode(rep) => match (rep.finite_source(), rep.regular_source()) {
                (Some(ft), _) => PointDoc::FTree { tree: ft.to_doc() },
                (_, Some(rt)) => PointDoc::Tree {
                    tree: rt.to_doc(),
                    seed: rep.seed(),
                },
                _ => unreachable!(),
            },
            Point::Derived { .. } => return Err(PointError::NotSerializable),
        })
    }

    fn from_doc(doc: &PointDoc) -> Result<Point, PointError> {
        Ok(match doc {
            PointDoc::Lit { word, tail } => Point::literal(word.clone(), *tail),
            PointDoc::Ep { preamble, period } => {
                Point::eventually_periodic(preamble.clone(), period.clone())?
            }
            PointDoc::Cols { columns, default } => Point::columns(
                columns
                    .iter()
                    .map(Point::from_doc)
                    .collect::<Result<_, _>>()?,
                Point::from_doc(default)?,
            ),
            PointDoc::Tree { tree, seed } => {
                let t = RegularTree::from_doc(tree)?;
                crate::trees::encode_tree_seeded(&t, *seed).map_err(PointError::Tree)?
            }
            PointDoc::FTree { tree } => {
                let t = FiniteTree::from_doc(tree)?;
                crate::trees::encode_tree(&t)
            }
        })
    }

    pub fn to_json(&self) -> Result<String, PointError> {
        let doc = self.to_doc()?;
        Ok(serde_json::to_string_pretty(&doc).expect("doc serializes"))
    }

    pub fn from_json(s: &str) -> Result<Point, PointError> {
        let doc: PointDoc =
            serde_json::from_str(s).map_err(|e| PointError::Malformed(e.to_string()))?;
        Point::from_doc(&doc)
    }
}
