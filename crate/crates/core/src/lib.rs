//! Desk-scale machinery for games and reductions on Baire space: finitely
//! presented points and stream machines, labeled trees with a position
//! codec, exact evaluators for limit-style operators and the pruning
//! derivative, explicit Weihrauch reduction witnesses with sample-based
//! verification, and a generalized Wadge game arbiter with classical
//! front ends.

pub mod error;
pub mod games;
pub mod machine;
pub mod ops;
pub mod point;
pub mod sampling;
pub mod trees;
pub mod weihrauch;
pub mod words;

pub use error::{GameError, OpError, PointError, TreeError, WitnessError};
pub use machine::{BoxMachine, Machine, RunResult, Step};
pub use point::{column_of, interleave, Point, Provenance};
pub use words::{pair, refines, unpair, Word};
