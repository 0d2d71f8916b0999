use thiserror::Error;

/// Errors raised by instance loading, tour operations and cost evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("position out of range: i = {i}, j = {j}, n = {n}")]
    PositionOutOfRange { i: usize, j: usize, n: usize },

    #[error("not a permutation of 0..{n}")]
    NotPermutation { n: usize },

    #[error("empty neighbour list")]
    EmptyNeighbours,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing road type for site {site}")]
    MissingRoadType { site: usize },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("logistic state {0} outside (0, 1)")]
    LogisticDomain(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
