//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch at degree {degree}: {context}")]
    ShapeMismatch { degree: i32, context: String },

    #[error("source/target space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("operation requires objects over the same Lie algebra")]
    BaseMismatch,

    #[error("Jacobi identity fails at generator triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("operator does not square to zero (first failure on generator `{generator}`)")]
    NotFlat { generator: String },

    #[error("element is not a cocycle")]
    NotACocycle,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("metric is not positive definite (leading minor of order {order} is not positive)")]
    NotPositiveDefinite { order: usize },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
