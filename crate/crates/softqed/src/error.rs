//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An adaptive rule exhausted its budget before meeting the tolerance.
    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },
    /// The occupation cap is too low for the requested accuracy.
    #[error("truncation error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Truncation { estimate: f64, tolerance: f64 },
    /// The occupation basis would exceed the oracle budget.
    #[error("basis of {requested} states exceeds the budget of {budget}")]
    Budget { requested: usize, budget: usize },
    /// Model tag and requested operation do not fit together.
    #[error("model or gauge mismatch: {0}")]
    Mismatch(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
