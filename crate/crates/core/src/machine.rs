//! Deterministic incremental stream transducers: the continuous realizers.
//!
//! A machine consumes one input symbol per feed and emits zero or more
//! output symbols. Emission is irrevocable, so the concatenated output is a
//! monotone function of the input word. A machine may instead signal
//! rejection when the input word has left every extension outside its
//! domain; this is a diagnostic, not a crash.

use crate::point::Point;
use crate::words::{pair, unpair, Word};
use std::sync::Arc;

/// Result of feeding one symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Emit(Vec<u64>),
    Reject,
}

pub trait Machine: Send {
    fn feed(&mut self, symbol: u64) -> Step;
}

pub type BoxMachine = Box<dyn Machine>;

/// Outcome of running a machine over a finite word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub output: Word,
    /// Input index at which the machine rejected, if it did.
    pub rejected: Option<usize>,
}

/// Feeds `input` symbol by symbol, concatenating emissions.
pub fn run_machine(m: &mut dyn Machine, input: &Word) -> RunResult {
    let mut output = Word::empty();
    for (i, &sym) in input.symbols().iter().enumerate() {
        match m.feed(sym) {
            Step::Emit(chunk) => output.0.extend(chunk),
            Step::Reject => {
                return RunResult {
                    output,
                    rejected: Some(i),
                }
            }
        }
    }
    RunResult {
        output,
        rejected: None,
    }
}

/// Feeds symbols of `base` until `want` outputs exist or `fuel` inputs are
/// consumed. Returns the outputs gathered (possibly short) and whether the
/// machine rejected.
pub fn run_machine_on_point(
    m: &mut dyn Machine,
    base: &Point,
    want: usize,
    fuel: usize,
) -> RunResult {
    let mut output = Word::empty();
    for i in 0..fuel {
        if output.len() >= want {
            break;
        }
        match m.feed(base.query(i as u64)) {
            Step::Emit(chunk) => output.0.extend(chunk),
            Step::Reject => {
                return RunResult {
                    output,
                    rejected: Some(i),
                }
            }
        }
    }
    RunResult {
        output,
        rejected: None,
    }
}

/// How a buffered machine settles one output position.
pub enum Decision {
    Emit(u64),
    Wait,
    Reject,
}

/// A machine defined by a pure rule `decide(input_so_far, out_pos)`.
/// Output positions are settled in order; the rule is consulted after every
/// input symbol.
pub struct BufferedMachine {
    buf: Vec<u64>,
    next_out: u64,
    rejected: bool,
    decide: Arc<dyn Fn(&[u64], u64) -> Decision + Send + Sync>,
}

impl BufferedMachine {
    pub fn new(decide: impl Fn(&[u64], u64) -> Decision + Send + Sync + 'static) -> Self {
        BufferedMachine {
            buf: Vec::new(),
            next_out: 0,
            rejected: false,
            decide: Arc::new(decide),
        }
    }
}

/// Emission cap per feed: a machine may settle unboundedly many output
/// cells from finite input (constant tails), so each feed flushes at most
/// this many symbols to keep runs finite.
pub const MAX_EMIT_PER_FEED: usize = 64;

impl Machine for BufferedMachine {
    fn feed(&mut self, symbol: u64) -> Step {
        if self.rejected {
            return Step::Reject;
        }
        self.buf.push(symbol);
        let mut out = Vec::new();
        while out.len() < MAX_EMIT_PER_FEED {
            match (self.decide)(&self.buf, self.next_out) {
                Decision::Emit(v) => {
                    out.push(v);
                    self.next_out += 1;
                }
                Decision::Wait => break,
                Decision::Reject => {
                    self.rejected = true;
                    return Step::Reject;
                }
            }
        }
        Step::Emit(out)
    }
}

/// The identity machine.
pub fn identity() -> BoxMachine {
    Box::new(BufferedMachine::new(|buf, pos| {
        match buf.get(pos as usize) {
            Some(&v) => Decision::Emit(v),
            None => Decision::Wait,
        }
    }))
}

/// Emits `f(symbol)` for each input symbol.
pub fn value_map(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> BoxMachine {
    Box::new(BufferedMachine::new(move |buf, pos| {
        match buf.get(pos as usize) {
            Some(&v) => Decision::Emit(f(v)),
            None => Decision::Wait,
        }
    }))
}

/// Emits the constant `c` once per input symbol.
pub fn constant(c: u64) -> BoxMachine {
    value_map(move |_| c)
}

/// Output position `pos` is `map(input[at(pos)])`, or a constant when `at`
/// returns `None`. The needed input position may exceed `pos`; the machine
/// buffers and waits.
pub fn rearranged(
    at: impl Fn(u64) -> Option<u64> + Send + Sync + 'static,
    map: impl Fn(u64, u64) -> u64 + Send + Sync + 'static,
    constant_at: impl Fn(u64) -> u64 + Send + Sync + 'static,
) -> BoxMachine {
    Box::new(BufferedMachine::new(move |buf, pos| match at(pos) {
        None => Decision::Emit(constant_at(pos)),
        Some(src) => match buf.get(src as usize) {
            Some(&v) => Decision::Emit(map(pos, v)),
            None => Decision::Wait,
        },
    }))
}

struct Composed {
    first: BoxMachine,
    second: BoxMachine,
    rejected: bool,
}

impl Machine for Composed {
    fn feed(&mut self, symbol: u64) -> Step {
        if self.rejected {
            return Step::Reject;
        }
        let mid = match self.first.feed(symbol) {
            Step::Emit(chunk) => chunk,
            Step::Reject => {
                self.rejected = true;
                return Step::Reject;
            }
        };
        let mut out = Vec::new();
        for v in mid {
            match self.second.feed(v) {
                Step::Emit(chunk) => out.extend(chunk),
                Step::Reject => {
                    self.rejected = true;
                    return Step::Reject;
                }
            }
        }
        Step::Emit(out)
    }
}

/// Feeds `f`'s output into `g`.
pub fn compose(f: BoxMachine, g: BoxMachine) -> BoxMachine {
    Box::new(Composed {
        first: f,
        second: g,
        rejected: false,
    })
}

struct Paired {
    left: BoxMachine,
    right: BoxMachine,
    left_out: Vec<u64>,
    right_out: Vec<u64>,
    next_out: u64,
    rejected: bool,
}

impl Machine for Paired {
    fn feed(&mut self, symbol: u64) -> Step {
        if self.rejected {
            return Step::Reject;
        }
        match self.left.feed(symbol) {
            Step::Emit(chunk) => self.left_out.extend(chunk),
            Step::Reject => {
                self.rejected = true;
                return Step::Reject;
            }
        }
        match self.right.feed(symbol) {
            Step::Emit(chunk) => self.right_out.extend(chunk),
            Step::Reject => {
                self.rejected = true;
                return Step::Reject;
            }
        }
        let mut out = Vec::new();
        while out.len() < MAX_EMIT_PER_FEED {
            let (n, k) = unpair(self.next_out);
            let v = match n {
                0 => self.left_out.get(k as usize).copied(),
                1 => self.right_out.get(k as usize).copied(),
                _ => Some(0),
            };
            match v {
                Some(v) => {
                    out.push(v);
                    self.next_out += 1;
                }
                None => break,
            }
        }
        Step::Emit(out)
    }
}

/// Runs both machines on the shared input and interleaves their outputs as
/// the pair `⟨left, right⟩` (column 0 and column 1, all other columns 0).
pub fn pair_machines(f: BoxMachine, g: BoxMachine) -> BoxMachine {
    Box::new(Paired {
        left: f,
        right: g,
        left_out: Vec::new(),
        right_out: Vec::new(),
        next_out: 0,
        rejected: false,
    })
}

/// A machine extracting column `n` of its input stream.
pub fn column_projection(n: u64) -> BoxMachine {
    rearranged(move |pos| Some(pair(n, pos)), |_, v| v, |_| 0)
}
