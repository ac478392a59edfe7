//! The catalog of explicit reduction witnesses.
//!
//! Each witness carries machine factories for its pre- and post-processors
//! and, where exact oracle evaluation needs a structured image, symbolic
//! shadows that produce the same stream as a presented point. Pre-machines
//! feed the oracle; post-machines consume the oracle answer (strong form)
//! or the pairing of the original input with the oracle answer (plain
//! form).

use crate::error::WitnessError;
use crate::machine::{BoxMachine, BufferedMachine, Decision, Machine, Step};
use crate::ops;
use crate::point::{Point, Provenance};
use crate::trees::{
    code_path, encode_tree_seeded, label_position, Edge, RegularTree, TreeCodeRep, UpWord,
};
use crate::words::{pair, unpair, Word};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::oracles::tree_rep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessForm {
    /// Post-processor consumes the oracle answer alone.
    Strong,
    /// Post-processor consumes the pairing of the input with the answer.
    Plain,
}

/// How verification compares the composite against the target evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    /// Symbolwise prefix agreement of the output streams.
    Prefix,
    /// Both outputs are tree codes; compare by exact bisimilarity.
    TreeBisim,
    /// Both outputs are column tables of tree codes; compare columnwise.
    ColumnsTreeBisim,
}

type Shadow = Arc<dyn Fn(&Point) -> Result<Point, WitnessError> + Send + Sync>;
type PostShadow = Arc<dyn Fn(&Point, &Point) -> Result<Point, WitnessError> + Send + Sync>;
type MachineFactory = Arc<dyn Fn() -> BoxMachine + Send + Sync>;

#[derive(Clone)]
pub struct ReductionWitness {
    pub name: String,
    pub form: WitnessForm,
    pub oracle_name: String,
    pub target_name: String,
    pub compare: CompareMode,
    pub make_pre: MachineFactory,
    pub make_post: MachineFactory,
    pub pre_shadow: Option<Shadow>,
    pub post_shadow: Option<PostShadow>,
}

impl ReductionWitness {
    pub fn pre_machine(&self) -> BoxMachine {
        (self.make_pre)()
    }
    pub fn post_machine(&self) -> BoxMachine {
        (self.make_post)()
    }
}

/// The names of the catalog witnesses, in a fixed order.
pub fn list_witnesses() -> Vec<&'static str> {
    vec![
        "parTD≤TD",
        "TD≤parIsFinite",
        "isFinite≤TD",
        "cyl-TD",
        "cyl-lim",
        "lim≤Linearize",
        "Linearize≤lim",
        "cyl-Linearize",
    ]
}

pub fn build_witness(name: &str) -> Result<ReductionWitness, WitnessError> {
    match name {
        "parTD≤TD" => Ok(par_td_below_td()),
        "TD≤parIsFinite" => Ok(td_below_par_is_finite()),
        "isFinite≤TD" => Ok(is_finite_below_td()),
        "cyl-TD" => Ok(cyl_td()),
        "cyl-lim" => Ok(cyl_lim()),
        "lim≤Linearize" => Ok(lim_below_linearize()),
        "Linearize≤lim" => Ok(linearize_below_lim()),
        "cyl-Linearize" => Ok(cyl_linearize()),
        _ => Err(WitnessError::UnknownWitness(name.to_string())),
    }
}

/// The identity witness around an oracle: both processors are the
/// identity machine.
pub fn identity_witness(oracle_name: &str, target_name: &str) -> ReductionWitness {
    ReductionWitness {
        name: format!("identity({oracle_name})"),
        form: WitnessForm::Strong,
        oracle_name: oracle_name.to_string(),
        target_name: target_name.to_string(),
        compare: CompareMode::Prefix,
        make_pre: Arc::new(crate::machine::identity),
        make_post: Arc::new(crate::machine::identity),
        pre_shadow: Some(Arc::new(|p| Ok(p.clone()))),
        post_shadow: Some(Arc::new(|_, g| Ok(g.clone()))),
    }
}

/// Wraps a strong witness as a plain one: the post-machine first projects
/// the oracle component out of the pairing, then runs the original
/// post-machine. Shadows are unchanged (they always see the raw answer).
pub fn as_plain(w: &ReductionWitness) -> ReductionWitness {
    assert_eq!(w.form, WitnessForm::Strong);
    let original_post = w.make_post.clone();
    ReductionWitness {
        name: format!("{} (plain)", w.name),
        form: WitnessForm::Plain,
        oracle_name: w.oracle_name.clone(),
        target_name: w.target_name.clone(),
        compare: w.compare,
        make_pre: w.make_pre.clone(),
        make_post: Arc::new(move || {
            crate::machine::compose(crate::machine::column_projection(1), original_post())
        }),
        pre_shadow: w.pre_shadow.clone(),
        post_shadow: w.post_shadow.clone(),
    }
}

// ---------------------------------------------------------------------------
// parTD ≤ TD
// ---------------------------------------------------------------------------

/// Cell of the star of a coded tree, expressed over the source code:
/// spine paths carry label 0, other paths shift the leading slot down.
fn star_cell(path: &[u64], lookup: impl Fn(u64) -> u64) -> u64 {
    if path.iter().all(|&s| s == 0) {
        return 1;
    }
    if path[0] == 0 {
        return 0;
    }
    let mut inner = vec![path[0] - 1];
    inner.extend_from_slice(&path[1..]);
    let v = lookup(label_position(&inner));
    if v == 0 {
        0
    } else {
        v + 1
    }
}

fn par_td_below_td() -> ReductionWitness {
    let make_pre: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let path = code_path(pos);
            if path.len() == 1 {
                return Decision::Emit(path[0] + 1);
            }
            let n = path[0];
            let rest = &path[1..];
            if rest.iter().all(|&s| s == 0) {
                return Decision::Emit(1);
            }
            if rest[0] == 0 {
                return Decision::Emit(0);
            }
            let mut inner = vec![rest[0] - 1];
            inner.extend_from_slice(&rest[1..]);
            let src = pair(n, label_position(&inner));
            match buf.get(src as usize) {
                None => Decision::Wait,
                Some(&v) => Decision::Emit(if v == 0 { 0 } else { v + 1 }),
            }
        }))
    });
    let make_post: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let (n, j) = unpair(pos);
            let inner = code_path(j);
            let mut src_path = vec![n, inner[0] + 1];
            src_path.extend_from_slice(&inner[1..]);
            let src = label_position(&src_path);
            match buf.get(src as usize) {
                None => Decision::Wait,
                Some(&v) => Decision::Emit(v.saturating_sub(1)),
            }
        }))
    });
    let pre_shadow: Shadow = Arc::new(|p| {
        let parts = column_tree_reps(p)?;
        let reps = parts.clone();
        Ok(Point::derived(
            "star-combined tree",
            Provenance::StarCombined { parts },
            move |pos| {
                let path = code_path(pos);
                if path.len() == 1 {
                    return path[0] + 1;
                }
                let n = path[0] as usize;
                match reps.get(n) {
                    Some(rep) => star_cell(&path[1..], |i| rep.query(i)),
                    None => star_cell(&path[1..], |_| 0),
                }
            },
        ))
    });
    let post_shadow: PostShadow = Arc::new(|_, g| {
        let parts = match g.provenance() {
            Provenance::TdOfStarCombined { parts } => parts.clone(),
            _ => {
                return Err(WitnessError::OracleDomainMiss(
                    "expected the derivative of a star-combined tree".into(),
                ))
            }
        };
        let cols = parts
            .iter()
            .map(|t| {
                let u = un_star(t);
                if u.is_empty() {
                    Point::zero()
                } else {
                    encode_tree_seeded(&u, 0).expect("unstar keeps a real tree")
                }
            })
            .collect();
        Ok(Point::columns(cols, Point::zero()))
    });
    ReductionWitness {
        name: "parTD≤TD".into(),
        form: WitnessForm::Strong,
        oracle_name: "td".into(),
        target_name: "par-td".into(),
        compare: CompareMode::ColumnsTreeBisim,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: Some(post_shadow),
    }
}

fn column_tree_reps(p: &Point) -> Result<Vec<TreeCodeRep>, WitnessError> {
    match p {
        Point::Columns { columns, default } => {
            if !is_zero_point(default) {
                return Err(WitnessError::OracleDomainMiss(
                    "tree sequence needs an empty default column".into(),
                ));
            }
            columns.iter().map(tree_rep).collect()
        }
        _ => Err(WitnessError::OracleDomainMiss(
            "expected a column table of tree codes".into(),
        )),
    }
}

fn is_zero_point(p: &Point) -> bool {
    match p {
        Point::Literal { word, tail } => *tail == 0 && word.symbols().iter().all(|&v| v == 0),
        Point::TreeCode(rep) => rep.to_regular().is_empty(),
        _ => false,
    }
}

/// Inverse of the star on regular presentations: drop the 0-labeled spine
/// under the root and decrement the remaining labels.
fn un_star(t: &RegularTree) -> RegularTree {
    let root = match t.root() {
        None => return RegularTree::empty(),
        Some(r) => r,
    };
    // Reachability after dropping root edges labeled 0.
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if seen.insert(v) {
            for &(label, to) in t.children(v) {
                if v == root && label == 0 {
                    continue;
                }
                stack.push(to);
            }
        }
    }
    let remap: BTreeMap<usize, usize> = seen.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for &v in &seen {
        for &(label, to) in t.children(v) {
            if v == root && label == 0 {
                continue;
            }
            edges.push(Edge {
                from: remap[&v],
                label: label - 1,
                to: remap[&to],
            });
        }
    }
    if edges.is_empty() {
        return RegularTree::empty();
    }
    RegularTree::from_parts(seen.len(), Some(remap[&root]), edges)
        .expect("unstar preserves reachability")
}

// ---------------------------------------------------------------------------
// TD ≤ parIsFinite
// ---------------------------------------------------------------------------

/// Column index of a node in the height-count image: 0 for the root,
/// `cell + 1` for the node whose label cell is `cell`.
pub fn node_column(path: &[u64]) -> u64 {
    if path.is_empty() {
        0
    } else {
        label_position(path) + 1
    }
}

/// Pre-processor: one output bit per input symbol. The column of a node
/// accumulates one 1 per newly revealed height increment of its subtree,
/// so the count of 1s equals the height (infinite when unbounded).
struct HeightCountMachine {
    time: usize,
    present: BTreeMap<Vec<u64>, u64>,
    heights: BTreeMap<Vec<u64>, u64>,
    root_height: u64,
    ones: BTreeMap<u64, u64>,
}

impl HeightCountMachine {
    fn new() -> Self {
        HeightCountMachine {
            time: 0,
            present: BTreeMap::new(),
            heights: BTreeMap::new(),
            root_height: 0,
            ones: BTreeMap::new(),
        }
    }

    fn known_height(&self, column: u64) -> u64 {
        if column == 0 {
            return self.root_height;
        }
        let path = code_path(column - 1);
        if !self.present.contains_key(&path) {
            return 0;
        }
        self.heights.get(&path).copied().unwrap_or(0)
    }
}

impl Machine for HeightCountMachine {
    fn feed(&mut self, symbol: u64) -> Step {
        let t = self.time as u64;
        self.time += 1;
        if symbol != 0 {
            let path = code_path(t);
            let ancestors_present =
                (1..path.len()).all(|d| self.present.contains_key(&path[..d]));
            if !ancestors_present {
                // Nonzero cell inside a killed column: outside the code domain.
                return Step::Reject;
            }
            let depth = path.len() as u64;
            self.root_height = self.root_height.max(depth);
            for d in 1..=path.len() {
                let prefix = path[..d].to_vec();
                let h = depth - d as u64;
                let entry = self.heights.entry(prefix).or_insert(0);
                *entry = (*entry).max(h);
            }
            self.present.insert(path, symbol - 1);
        }
        let (column, _) = unpair(t);
        let known = self.known_height(column);
        let emitted = self.ones.entry(column).or_insert(0);
        let v = if known > *emitted {
            *emitted += 1;
            1
        } else {
            0
        };
        Step::Emit(vec![v])
    }
}

fn td_below_par_is_finite() -> ReductionWitness {
    let make_pre: MachineFactory = Arc::new(|| Box::new(HeightCountMachine::new()));
    // Plain post: reads the original code from column 0 of the pairing and
    // the finiteness bits from column 1, zeroing the cells of finite-height
    // nodes.
    let make_post: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let path = code_path(pos);
            let own = pair(0, pos);
            let mut needed = vec![(own, None)];
            let root_bit = pair(1, 0);
            needed.push((root_bit, Some(0u64)));
            for d in 1..=path.len() {
                needed.push((pair(1, node_column(&path[..d])), Some(0)));
            }
            let mut own_value = 0;
            for (src, expect) in &needed {
                match buf.get(*src as usize) {
                    None => return Decision::Wait,
                    Some(&v) => match expect {
                        None => own_value = v,
                        Some(keep) => {
                            if v != *keep {
                                return Decision::Emit(0);
                            }
                        }
                    },
                }
            }
            Decision::Emit(own_value)
        }))
    });
    let pre_shadow: Shadow = Arc::new(|p| {
        let rep = tree_rep(p)?;
        let sim = machine_sim_point(
            "height-count bits",
            Provenance::HeightBits { rep: rep.clone() },
            Point::TreeCode(rep),
            || Box::new(HeightCountMachine::new()),
        );
        Ok(sim)
    });
    let post_shadow: PostShadow = Arc::new(|p, bits| {
        let rep = tree_rep(p)?;
        let tree = rep.to_regular();
        if bits.query(0) == 1 {
            return Ok(Point::zero());
        }
        // One representative slot path per vertex, then keep the vertices
        // whose bit reports an infinite subtree.
        let mut keep = std::collections::BTreeSet::new();
        let mut queue = std::collections::VecDeque::new();
        let mut seen = std::collections::BTreeSet::new();
        let root = tree.root().expect("bit 0 certified a nonempty tree");
        seen.insert(root);
        keep.insert(root);
        queue.push_back((root, Vec::<u64>::new()));
        let offset = rep.seed() % 3;
        while let Some((v, path)) = queue.pop_front() {
            for (idx, &(_, to)) in tree.children(v).iter().enumerate() {
                if !seen.insert(to) {
                    continue;
                }
                let mut child_path = path.clone();
                child_path.push(offset + idx as u64);
                if bits.query(node_column(&child_path)) == 0 {
                    keep.insert(to);
                }
                queue.push_back((to, child_path));
            }
        }
        let restricted = tree.restrict(&keep);
        if restricted.is_empty() {
            Ok(Point::zero())
        } else {
            Ok(encode_tree_seeded(&restricted, 0).expect("derivative not root-only"))
        }
    });
    ReductionWitness {
        name: "TD≤parIsFinite".into(),
        form: WitnessForm::Plain,
        oracle_name: "par-isfinite".into(),
        target_name: "td".into(),
        compare: CompareMode::TreeBisim,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: Some(post_shadow),
    }
}

/// A point computed by lazily running a machine over a base point's stream.
fn machine_sim_point(
    label: &str,
    provenance: Provenance,
    base: Point,
    make: impl Fn() -> BoxMachine + Send + Sync + 'static,
) -> Point {
    struct Sim {
        machine: BoxMachine,
        fed: u64,
        out: Vec<u64>,
    }
    let state = Mutex::new(Sim {
        machine: make(),
        fed: 0,
        out: Vec::new(),
    });
    let state = Arc::new(state);
    Point::derived(label, provenance, move |i| {
        let mut s = state.lock().expect("sim lock");
        while (s.out.len() as u64) <= i {
            let sym = base.query(s.fed);
            s.fed += 1;
            match s.machine.feed(sym) {
                Step::Emit(chunk) => s.out.extend(chunk),
                Step::Reject => panic!("machine rejected a certified input"),
            }
            if s.fed > 2_000_000 {
                panic!("machine simulation fuel exhausted at position {i}");
            }
        }
        s.out[i as usize]
    })
}

// ---------------------------------------------------------------------------
// isFinite ≤ TD
// ---------------------------------------------------------------------------

/// Pre-processor: builds the count-branch tree. A 1 extends the 0-labeled
/// branch; a 0 at current count `n` extends the branch labeled `n + 1`.
/// Children occupy globally fresh slots equal to their creation time, so
/// every code cell settles promptly.
struct CountBranchMachine {
    time: u64,
    count: u64,
    zero_tip: Vec<u64>,
    count_tips: BTreeMap<u64, Vec<u64>>,
    nodes: BTreeMap<Vec<u64>, u64>,
    emit_cursor: u64,
}

impl CountBranchMachine {
    fn new() -> Self {
        CountBranchMachine {
            time: 0,
            count: 0,
            zero_tip: Vec::new(),
            count_tips: BTreeMap::new(),
            nodes: BTreeMap::new(),
            emit_cursor: 0,
        }
    }
}

impl Machine for CountBranchMachine {
    fn feed(&mut self, symbol: u64) -> Step {
        let t = self.time;
        self.time += 1;
        match symbol {
            1 => {
                let mut node = self.zero_tip.clone();
                node.push(t);
                self.nodes.insert(node.clone(), 0);
                self.zero_tip = node;
                self.count += 1;
            }
            0 => {
                let n = self.count;
                let tip = self.count_tips.get(&n).cloned().unwrap_or_default();
                let mut node = tip;
                node.push(t);
                self.nodes.insert(node.clone(), n + 1);
                self.count_tips.insert(n, node);
            }
            _ => return Step::Reject,
        }
        let mut out = Vec::new();
        while out.len() < crate::machine::MAX_EMIT_PER_FEED {
            let path = code_path(self.emit_cursor);
            if path.iter().max().copied().unwrap_or(0) >= self.time {
                break;
            }
            out.push(self.nodes.get(&path).map(|&l| l + 1).unwrap_or(0));
            self.emit_cursor += 1;
        }
        Step::Emit(out)
    }
}

fn is_finite_below_td() -> ReductionWitness {
    let make_pre: MachineFactory = Arc::new(|| Box::new(CountBranchMachine::new()));
    // Post: the answer bit is read off the label of the derivative's
    // surviving branch: label 0 means infinitely many 1s.
    let make_post: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, _pos| {
            for k in 0.. {
                let cell = pair(k, 0);
                match buf.get(cell as usize).copied() {
                    None => return Decision::Wait,
                    Some(0) => continue,
                    Some(v) => return Decision::Emit(if v == 1 { 0 } else { 1 }),
                }
            }
            unreachable!()
        }))
    });
    let pre_shadow: Shadow = Arc::new(|p| {
        match p {
            Point::Literal { .. } | Point::EventuallyPeriodic { .. } => {}
            _ => {
                return Err(WitnessError::OracleDomainMiss(
                    "finiteness input must be a presented bit stream".into(),
                ))
            }
        }
        let bits = p.clone();
        Ok(machine_sim_point(
            "count-branch tree",
            Provenance::IsFiniteTree {
                bits: Box::new(bits.clone()),
            },
            bits,
            || Box::new(CountBranchMachine::new()),
        ))
    });
    let post_shadow: PostShadow = Arc::new(|_, g| {
        for k in 0..64 {
            let v = g.query(pair(k, 0));
            if v != 0 {
                return Ok(Point::constant(if v == 1 { 0 } else { 1 }));
            }
        }
        Err(WitnessError::OracleDomainMiss(
            "derivative has no visible branch".into(),
        ))
    });
    ReductionWitness {
        name: "isFinite≤TD".into(),
        form: WitnessForm::Strong,
        oracle_name: "td".into(),
        target_name: "isfinite".into(),
        compare: CompareMode::Prefix,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: Some(post_shadow),
    }
}

// ---------------------------------------------------------------------------
// cyl-TD
// ---------------------------------------------------------------------------

fn cyl_td() -> ReductionWitness {
    // Pre: relabel every cell value v to <1, v-1> + 1 and thread the input
    // code itself along a fresh infinite branch labeled <0, p(n)>.
    let make_pre: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let path = code_path(pos);
            if path[0] == 0 {
                if path.iter().all(|&s| s == 0) {
                    let d = path.len() as u64;
                    match buf.get((d - 1) as usize) {
                        None => Decision::Wait,
                        Some(&v) => Decision::Emit(pair(0, v) + 1),
                    }
                } else {
                    Decision::Emit(0)
                }
            } else {
                let mut inner = vec![path[0] - 1];
                inner.extend_from_slice(&path[1..]);
                match buf.get(label_position(&inner) as usize).copied() {
                    None => Decision::Wait,
                    Some(0) => Decision::Emit(0),
                    Some(v) => Decision::Emit(pair(1, v - 1) + 1),
                }
            }
        }))
    });
    // Post: column 0 replays the threaded input; column 1 strips the branch
    // and unpacks the labels, recovering the derivative's code.
    let make_post: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let (n, k) = unpair(pos);
            match n {
                0 => {
                    let src = label_position(&vec![0; (k + 1) as usize]);
                    match buf.get(src as usize).copied() {
                        None => Decision::Wait,
                        Some(0) => Decision::Emit(0),
                        Some(v) => Decision::Emit(unpair(v - 1).1),
                    }
                }
                1 => {
                    let inner = code_path(k);
                    let mut src_path = vec![inner[0] + 1];
                    src_path.extend_from_slice(&inner[1..]);
                    match buf.get(label_position(&src_path) as usize).copied() {
                        None => Decision::Wait,
                        Some(0) => Decision::Emit(0),
                        Some(v) => Decision::Emit(unpair(v - 1).1 + 1),
                    }
                }
                _ => Decision::Emit(0),
            }
        }))
    });
    let pre_shadow: Shadow = Arc::new(|p| {
        let rep = tree_rep(p)?;
        let code = Point::TreeCode(rep.clone());
        Ok(Point::derived(
            "code-threaded relabeled tree",
            Provenance::CylTdImage { rep },
            move |pos| {
                let path = code_path(pos);
                if path[0] == 0 {
                    if path.iter().all(|&s| s == 0) {
                        let d = path.len() as u64;
                        pair(0, code.query(d - 1)) + 1
                    } else {
                        0
                    }
                } else {
                    let mut inner = vec![path[0] - 1];
                    inner.extend_from_slice(&path[1..]);
                    let v = code.query(label_position(&inner));
                    if v == 0 {
                        0
                    } else {
                        pair(1, v - 1) + 1
                    }
                }
            },
        ))
    });
    ReductionWitness {
        name: "cyl-TD".into(),
        form: WitnessForm::Strong,
        oracle_name: "td".into(),
        target_name: "cyl-td-pair".into(),
        compare: CompareMode::Prefix,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: None,
    }
}

// ---------------------------------------------------------------------------
// cyl-lim
// ---------------------------------------------------------------------------

fn cyl_lim() -> ReductionWitness {
    // Pre: column n of the image is the pairing of the whole input with the
    // input's column n, so the pointwise limit is <p, lim p>.
    let make_pre: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let (n, j) = unpair(pos);
            let (a, k) = unpair(j);
            let src = match a {
                0 => k,
                1 => pair(n, k),
                _ => return Decision::Emit(0),
            };
            match buf.get(src as usize) {
                None => Decision::Wait,
                Some(&v) => Decision::Emit(v),
            }
        }))
    });
    let make_post: MachineFactory = Arc::new(crate::machine::identity);
    let pre_shadow: Shadow = Arc::new(|p| match p {
        Point::Columns { columns, default } => {
            let cols = columns
                .iter()
                .map(|c| Point::pair_points(p.clone(), c.clone()))
                .collect();
            let d = Point::pair_points(p.clone(), (**default).clone());
            Ok(Point::columns(cols, d))
        }
        Point::Literal { .. } | Point::EventuallyPeriodic { .. } | Point::TreeCode(_) => {
            Ok(Point::derived(
                "input paired into every column",
                Provenance::CylLimImage {
                    base: Box::new(p.clone()),
                },
                {
                    let p = p.clone();
                    move |pos| {
                        let (n, j) = unpair(pos);
                        let (a, k) = unpair(j);
                        match a {
                            0 => p.query(k),
                            1 => p.query(pair(n, k)),
                            _ => 0,
                        }
                    }
                },
            ))
        }
        _ => Err(WitnessError::OracleDomainMiss(
            "cylinder image needs a presented point".into(),
        )),
    });
    let post_shadow: PostShadow = Arc::new(|_, g| Ok(g.clone()));
    ReductionWitness {
        name: "cyl-lim".into(),
        form: WitnessForm::Strong,
        oracle_name: "lim".into(),
        target_name: "cyl-lim-pair".into(),
        compare: CompareMode::Prefix,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: Some(post_shadow),
    }
}

// ---------------------------------------------------------------------------
// lim ≤ Linearize
// ---------------------------------------------------------------------------

/// Pre-processor: the trie of the column guesses. After column `n` is fully
/// visible, the word `(p)_n restricted to n` (padded with one 0) is
/// inserted; created nodes take globally fresh slots so cells settle
/// promptly.
struct TrieCodeMachine {
    buf: Vec<u64>,
    words_done: u64,
    trie: BTreeMap<Vec<u64>, Vec<u64>>,
    nodes: BTreeMap<Vec<u64>, u64>,
    events: u64,
    emit_cursor: u64,
}

impl TrieCodeMachine {
    fn new() -> Self {
        TrieCodeMachine {
            buf: Vec::new(),
            words_done: 0,
            trie: BTreeMap::new(),
            nodes: BTreeMap::new(),
            events: 0,
            emit_cursor: 0,
        }
    }

    fn insert(&mut self, w: &[u64]) {
        for d in 1..=w.len() {
            if self.trie.contains_key(&w[..d]) {
                continue;
            }
            let parent = self.trie.get(&w[..d - 1]).cloned().unwrap_or_default();
            let mut path = parent;
            path.push(self.events);
            self.events += 1;
            self.trie.insert(w[..d].to_vec(), path.clone());
            self.nodes.insert(path, w[d - 1]);
        }
    }
}

impl Machine for TrieCodeMachine {
    fn feed(&mut self, symbol: u64) -> Step {
        self.buf.push(symbol);
        loop {
            let n = self.words_done;
            let need = if n == 0 { 0 } else { pair(n, n - 1) + 1 };
            if (self.buf.len() as u64) < need.max(1) {
                break;
            }
            let mut w: Vec<u64> = (0..n).map(|k| self.buf[pair(n, k) as usize]).collect();
            w.push(0);
            self.insert(&w);
            self.words_done += 1;
        }
        let mut out = Vec::new();
        while out.len() < crate::machine::MAX_EMIT_PER_FEED {
            let path = code_path(self.emit_cursor);
            if path.iter().max().copied().unwrap_or(0) >= self.events {
                break;
            }
            out.push(self.nodes.get(&path).map(|&l| l + 1).unwrap_or(0));
            self.emit_cursor += 1;
        }
        Step::Emit(out)
    }
}

fn lim_below_linearize() -> ReductionWitness {
    let make_pre: MachineFactory = Arc::new(|| Box::new(TrieCodeMachine::new()));
    let make_post: MachineFactory = Arc::new(ops::ind_label_machine);
    let pre_shadow: Shadow = Arc::new(|p| {
        let tree = guess_trie_tree(p)?;
        encode_tree_seeded(&tree, 0).map_err(|e| WitnessError::Op(e.into()))
    });
    let post_shadow: PostShadow = Arc::new(|_, g| {
        let rep = tree_rep(g)?;
        ops::ind_label(&rep.to_regular()).map_err(WitnessError::Op)
    });
    ReductionWitness {
        name: "lim≤Linearize".into(),
        form: WitnessForm::Strong,
        oracle_name: "linearize".into(),
        target_name: "lim".into(),
        compare: CompareMode::Prefix,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: Some(post_shadow),
    }
}

/// A regular tree whose unique infinite branch carries the limit of `p` and
/// whose finite hairs carry the early column guesses: the limit chain with
/// a 0-labeled pad leaf on every chain vertex, plus root-attached hairs.
fn guess_trie_tree(p: &Point) -> Result<RegularTree, WitnessError> {
    let limit = ops::lim_eval(p).map_err(WitnessError::Op)?;
    let y = match &limit {
        Point::Literal { word, tail } => UpWord::new(word.0.clone(), vec![*tail]),
        Point::EventuallyPeriodic { preamble, period } => {
            UpWord::new(preamble.0.clone(), period.0.clone())
        }
        _ => {
            return Err(WitnessError::OracleDomainMiss(
                "limit is not presented flat".into(),
            ))
        }
    };
    let hair_count = match p {
        Point::Columns { columns, .. } => columns.len() as u64,
        Point::EventuallyPeriodic { preamble, .. } => {
            let mut n1 = 0u64;
            while pair(n1, 0) < preamble.len() as u64 {
                n1 += 1;
            }
            n1
        }
        Point::Literal { .. } => 1,
        _ => 0,
    };
    // Chain with cycle.
    let chain = ops::chain_tree(&y);
    let chain_n = chain.vertex_count();
    let mut edges = chain.edges();
    // Shared pad leaf: every chain vertex gets a 0-labeled leaf child.
    let pad = chain_n;
    let mut vertex_count = chain_n + 1;
    for v in 0..chain_n {
        edges.push(Edge { from: v, label: 0, to: pad });
    }
    // Hairs for the explicit early guesses.
    for n in 0..hair_count {
        let w: Vec<u64> = (0..n).map(|k| p.query(pair(n, k))).collect();
        let mut from = 0usize;
        for &l in w.iter().chain(std::iter::once(&0)) {
            let v = vertex_count;
            vertex_count += 1;
            edges.push(Edge { from, label: l, to: v });
            from = v;
        }
    }
    RegularTree::from_parts(vertex_count, Some(0), edges)
        .map_err(|e| WitnessError::Op(e.into()))
}

// ---------------------------------------------------------------------------
// Linearize ≤ lim
// ---------------------------------------------------------------------------

fn linearize_below_lim() -> ReductionWitness {
    // Pre: column n of the image is guess(n, n) padded with zeros.
    let make_pre: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let (n, j) = unpair(pos);
            if (buf.len() as u64) < n {
                return Decision::Wait;
            }
            match ops::guess_word(&Word(buf.to_vec()), n, n) {
                Err(_) => Decision::Reject,
                Ok(g) => Decision::Emit(g.get(j as usize).unwrap_or(0)),
            }
        }))
    });
    // Post: wrap the limit stream as the code of the linear chain carrying it.
    let make_post: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let path = code_path(pos);
            if path.iter().all(|&s| s == 0) {
                match buf.get(path.len() - 1) {
                    None => Decision::Wait,
                    Some(&v) => Decision::Emit(v + 1),
                }
            } else {
                Decision::Emit(0)
            }
        }))
    });
    let pre_shadow: Shadow = Arc::new(|p| {
        let rep = tree_rep(p)?;
        let props = crate::trees::tree_props(&rep.to_regular());
        if !props.is_proper || !props.is_finitely_branching {
            return Err(WitnessError::OracleDomainMiss(
                "guess columns need a proper finitely branching tree".into(),
            ));
        }
        let code = Point::TreeCode(rep.clone());
        Ok(Point::derived(
            "stage guesses",
            Provenance::GuessColumns { rep },
            move |pos| {
                let (n, j) = unpair(pos);
                let prefix = code.prefix(n as usize);
                match ops::guess_word(&prefix, n, n) {
                    Err(_) => 0,
                    Ok(g) => g.get(j as usize).unwrap_or(0),
                }
            },
        ))
    });
    let post_shadow: PostShadow = Arc::new(|_, g| {
        let y = match g {
            Point::Literal { word, tail } => UpWord::new(word.0.clone(), vec![*tail]),
            Point::EventuallyPeriodic { preamble, period } => {
                UpWord::new(preamble.0.clone(), period.0.clone())
            }
            _ => {
                return Err(WitnessError::OracleDomainMiss(
                    "limit output is not presented flat".into(),
                ))
            }
        };
        encode_tree_seeded(&ops::chain_tree(&y), 0).map_err(|e| WitnessError::Op(e.into()))
    });
    ReductionWitness {
        name: "Linearize≤lim".into(),
        form: WitnessForm::Strong,
        oracle_name: "lim".into(),
        target_name: "linearize".into(),
        compare: CompareMode::TreeBisim,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: Some(post_shadow),
    }
}

// ---------------------------------------------------------------------------
// cyl-Linearize
// ---------------------------------------------------------------------------

fn cyl_linearize() -> ReductionWitness {
    // Pre: pack the input code's symbol for the node depth into every label.
    let make_pre: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let d = code_path(pos).len() as u64;
            let own = buf.get(pos as usize).copied();
            let depth_sym = buf.get((d - 1) as usize).copied();
            match (own, depth_sym) {
                (Some(0), _) => Decision::Emit(0),
                (Some(v), Some(q)) => Decision::Emit(pair(v - 1, q) + 1),
                _ => Decision::Wait,
            }
        }))
    });
    let make_post: MachineFactory = Arc::new(|| {
        Box::new(BufferedMachine::new(|buf, pos| {
            let (n, k) = unpair(pos);
            match n {
                0 => {
                    let src = label_position(&vec![0; (k + 1) as usize]);
                    match buf.get(src as usize).copied() {
                        None => Decision::Wait,
                        Some(0) => Decision::Emit(0),
                        Some(v) => Decision::Emit(unpair(v - 1).1),
                    }
                }
                1 => {
                    let inner = code_path(k);
                    if inner.iter().all(|&s| s == 0) {
                        let src = label_position(&vec![0; inner.len()]);
                        match buf.get(src as usize).copied() {
                            None => Decision::Wait,
                            Some(0) => Decision::Emit(0),
                            Some(v) => Decision::Emit(unpair(v - 1).0 + 1),
                        }
                    } else {
                        Decision::Emit(0)
                    }
                }
                _ => Decision::Emit(0),
            }
        }))
    });
    let pre_shadow: Shadow = Arc::new(|p| {
        let rep = tree_rep(p)?;
        let code = Point::TreeCode(rep.clone());
        Ok(Point::derived(
            "depth-packed labels",
            Provenance::CylLinearizeImage { rep },
            move |pos| {
                let d = code_path(pos).len() as u64;
                let v = code.query(pos);
                if v == 0 {
                    0
                } else {
                    pair(v - 1, code.query(d - 1)) + 1
                }
            },
        ))
    });
    ReductionWitness {
        name: "cyl-Linearize".into(),
        form: WitnessForm::Strong,
        oracle_name: "linearize".into(),
        target_name: "cyl-linearize-pair".into(),
        compare: CompareMode::Prefix,
        make_pre,
        make_post,
        pre_shadow: Some(pre_shadow),
        post_shadow: None,
    }
}
