use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// A Rényi order too close to 0 or 1 (or otherwise inadmissible).
    #[error("inadmissible divergence order {0}")]
    InvalidOrder(f64),

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("all atoms carry zero mass")]
    ZeroMass,

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("duplicate atom label {0:?}")]
    DuplicateLabel(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("minimizer did not converge after {iterations} iterations (bracket width {width:e})")]
    NonConvergence { iterations: usize, width: f64 },

    #[error("quadrature refinement stalled at {panels} panels (change {change:e})")]
    RefinementFailed { panels: usize, change: f64 },

    #[error("drift {value} exceeds the declared bound {bound} at x = {x}")]
    DriftEnvelope { x: f64, value: f64, bound: f64 },

    #[error("degenerate estimator: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
