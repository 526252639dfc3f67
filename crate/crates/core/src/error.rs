use thiserror::Error;

use crate::channels::KrausDiagnostics;
use crate::state::StateDiagnostics;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: must be at least 2")]
    InvalidDimension { dim: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(StateDiagnostics),

    #[error("incomplete Kraus set: {0}")]
    IncompleteKraus(KrausDiagnostics),

    #[error("numerical consistency failure: {what} (residual {residual:.3e})")]
    Numerical { what: String, residual: f64 },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
