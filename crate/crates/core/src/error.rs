use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("letter index {index} out of range for rank {rank}")]
    LetterOutOfRange { index: i32, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("malformed Whitehead automorphism (A;a): {reason}")]
    MalformedWhitehead { reason: String },

    #[error("invalid transvection letters: a = {a}, b = {b} (need a != b^±1)")]
    BadTransvectionPair { a: String, b: String },

    #[error("automorphism carries no factorization")]
    NoFactorization,

    #[error("set of size {size} cannot be a partial basis of F_{rank}")]
    TooManyWords { size: usize, rank: usize },

    #[error("not a partial basis: {reason}")]
    NotPartialBasis { reason: String },

    #[error("budget exceeded: {what} cap {cap}")]
    BudgetExceeded { what: String, cap: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("element not found: {0}")]
    ElementNotFound(String),

    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("map is not order preserving: {0}")]
    NotOrderPreserving(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("candidate set is not a basis: {0}")]
    NotABasis(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
