use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge on [{lo}, {hi}] (estimate {estimate:e}, error {error:e})")]
    QuadratureNonConvergence {
        lo: f64,
        hi: f64,
        estimate: f64,
        error: f64,
    },

    #[error("root bracket [{lo}, {hi}] does not contain a sign change")]
    Bracket { lo: f64, hi: f64 },

    #[error("zero cache {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error("missing checkpoint k = {0}")]
    MissingCheckpoint(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. } | Error::Bracket { .. } | Error::Cache { .. }
        )
    }
}
