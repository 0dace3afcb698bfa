use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("subspace of stated dimension {stated} has rank {rank}")]
    DependentSubspace { stated: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("index {index} out of range 1..={max}")]
    IndexRange { index: usize, max: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("root {0} is not odd")]
    NotOdd(String),
    #[error("invalid induction datum: {0}")]
    InvalidDatum(String),
    #[error("weight {weight} at depth {depth} exceeds truncation depth {max}")]
    Truncation { weight: String, depth: i64, max: i64 },
    #[error("{0} does not centralize {1}")]
    NotCentralizing(String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no weight has depth + {cost} <= {depth}")]
    EmptyRegion { depth: i64, cost: i64 },
    #[error("depth {depth} allows exponent {exponent} of {root}, above the packing limit")]
    ExponentOverflow { root: String, exponent: i64, depth: i64 },
    #[error("graph for n = {0} is too large (n <= 6)")]
    GraphTooLarge(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
