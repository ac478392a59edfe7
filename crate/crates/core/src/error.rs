//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("node set is not prefix-closed: missing parent of {path:?}")]
    NotPrefixClosed { path: Vec<u64> },
    #[error("the root carries no label")]
    RootNotLabelable,
    #[error("tree consisting of only a root is not representable")]
    RootOnly,
    #[error("vertex {id} is not declared")]
    BadVertex { id: u64 },
    #[error("duplicate vertex id {id}")]
    DuplicateVertex { id: u64 },
    #[error("vertex {id} is unreachable from the root")]
    Unreachable { id: u64 },
    #[error("nonempty tree requires a root")]
    MissingRoot,
    #[error("word violates the code domain at position {position}")]
    DomainViolation { position: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointError {
    #[error("eventually periodic presentation requires a nonempty period")]
    EmptyPeriod,
    #[error("derived points have no textual form")]
    NotSerializable,
    #[error("malformed point document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("input is outside the operator's certified domain: {0}")]
    NotInDomain(String),
    #[error("column {index} is outside the operator's certified domain: {reason}")]
    ColumnNotInDomain { index: u64, reason: String },
    #[error("symbol {value} at position {position} is not a bit")]
    NonBinary { position: u64, value: u64 },
    #[error("prefix of length {have} does not determine stage {stage}")]
    InsufficientPrefix { stage: u64, have: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("unknown witness name: {0}")]
    UnknownWitness(String),
    #[error("fuel exhausted after {fed} input symbols ({produced}/{wanted} output symbols)")]
    FuelExhausted {
        fed: usize,
        produced: usize,
        wanted: usize,
    },
    #[error("oracle domain miss: {0}")]
    OracleDomainMiss(String),
    #[error("machine rejected its input at symbol {position}")]
    Rejected { position: usize },
    #[error(transparent)]
    Op(#[from] OpError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("front end is incompatible with the configured probe/operator pair: {0}")]
    IncompatibleFrontEnd(String),
    #[error("rule violation at round {round}: {reason}")]
    RuleViolation { round: usize, reason: String },
    #[error("strategy is not deterministic: {0}")]
    NonDeterministicStrategy(String),
    #[error("interactive strategies are only available in the play REPL")]
    InteractiveUnavailable,
    #[error(transparent)]
    Op(#[from] OpError),
}
