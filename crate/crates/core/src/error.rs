use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("elements belong to different quaternion algebras")]
    AlgebraMismatch,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("not an order: {0}")]
    NotAnOrder(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input is not positive definite")]
    NotPositiveDefinite,

    /// An internal consistency check failed. Indicates a bug or a violated
    /// mathematical guarantee, never bad user input.
    #[error("internal check failed: {0}")]
    Fault(String),

    #[error("unknown CM row label {0:?}")]
    UnknownRow(String),
}
