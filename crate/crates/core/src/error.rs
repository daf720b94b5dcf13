use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator factor vanished. `index` is the coefficient or term index
    /// at which it happened and `factor` names the vanishing quantity.
    #[error("pole at index {index}: {factor} vanishes")]
    Pole { index: i64, factor: String },
    #[error("path length {len} exceeds the enumeration cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("matrix of size {size} exceeds the brute-force limit {limit}")]
    SizeExceeded { size: usize, limit: usize },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("could not separate roots after {steps} refinements")]
    PrecisionExhausted { steps: usize },
    #[error("positivity is only characterized for r >= s (got r={r}, s={s})")]
    InvalidRegime { r: usize, s: usize },
    #[error("parameters violate a_1 < ... < a_r < a_1 + 1 at position {position}")]
    WindowViolation { position: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("power series division needs a nonzero constant term")]
    NonUnitDivisor,
    #[error("internal identity failed: {0}")]
    Inconsistent(String),
    #[error("series is not terminating: {0}")]
    NotTerminating(String),
}

pub type Result<T> = std::result::Result<T, Error>;
