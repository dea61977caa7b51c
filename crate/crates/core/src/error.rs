//! Error type shared by every module.

use thiserror::Error;

/// Everything that can go wrong in eelkit.
#[derive(Debug, Error)]
pub enum EelError {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two consecutive samples coincide, so no secant direction exists.
    #[error("degenerate sample: points {index} and {} coincide", index + 1)]
    DegenerateSample { index: usize },

    /// Two samples coincide; λ-curves are injective.
    #[error("samples {first} and {second} coincide; the curve is not injective on its samples")]
    NonInjective { first: usize, second: usize },

    #[error("index {index} out of range for a curve with {len} samples")]
    IndexOutOfRange { index: usize, len: usize },

    /// A documented precondition does not hold for the given input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction would need more samples than the caller allows.
    #[error("construction needs about {required:.3e} samples, over the budget of {budget}")]
    SampleBudget { required: f64, budget: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, EelError>;

pub(crate) fn domain(msg: impl Into<String>) -> EelError {
    EelError::Domain(msg.into())
}
