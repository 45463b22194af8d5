use thiserror::Error;

/// Errors raised by the library. Check failures (a bound that does not hold)
/// are reported in result structs, not through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a lattice of rank at least 1")]
    ZeroRank,

    #[error("the direction vector is zero")]
    ZeroVector,

    #[error("{0}")]
    Domain(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("sign refinement exceeded {bits} bits; independence assertion suspect")]
    IndependenceSuspect { bits: u64 },

    #[error("scalars belong to different constant sets")]
    ConstantSetMismatch,

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("proposition violation: {0}")]
    PropositionViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
