//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the exact computations.
///
/// `Degenerate` is special: it signals that a particular rational
/// specialization of the torus weights hit a vanishing denominator, and the
/// caller is expected to retry with a fresh specialization rather than treat
/// it as a hard failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A denominator vanished under the current weight specialization.
    #[error("degenerate specialization: {0}")]
    Degenerate(String),
    /// Intersection numbers requested in the wrong dimension.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Malformed user-facing input (parsing, configuration, JSON).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A closed formula that only makes sense for Calabi-Yau total spaces.
    #[error("not Calabi-Yau: {0}")]
    NotCalabiYau(String),
    /// A series failed a structural requirement (e.g. divisibility by `w`).
    #[error("malformed series: {0}")]
    Malformed(String),
    /// Two routes (or two specializations) that must agree did not.
    #[error("identity violated: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True when retrying with another specialization may succeed.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
