use thiserror::Error;

/// Errors raised by the model, the closed-form evaluator and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative evaluation time t = {0}")]
    NegativeTime(f64),

    #[error("trace deviates from one by {deviation:e} (tolerance {tolerance:e}); truncation too coarse")]
    TraceDeviation { deviation: f64, tolerance: f64 },

    #[error("state is not positive semidefinite: {0}")]
    NotPositive(String),

    #[error("matrix is not hermitian (max |rho - rho^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("state leaves the X structure (max off-X magnitude {0:e})")]
    NotXState(f64),

    #[error("resonant evaluation requested with detuning {0} != 0")]
    NotResonant(f64),
}

pub type Result<T> = std::result::Result<T, DynError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> DynError {
    DynError::InvalidParameter { name, reason: reason.into() }
}
