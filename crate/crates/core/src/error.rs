use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the geometry kernels, the quadrature engine, the theorem
/// checks and the suite runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("radius {r} lies below the pole regularization radius {r_min}")]
    Pole { r: f64, r_min: f64 },

    #[error("ordering violated: {0}")]
    Ordering(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate}, error {error}")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    #[error("space is not compact: {0}")]
    NonCompact(String),

    #[error("invalid profile: {0}")]
    Profile(String),

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for errors that express "this estimate does not apply to these
    /// parameters" rather than a numerical or input failure.
    pub fn is_inapplicable(&self) -> bool {
        matches!(self, Error::Range(_) | Error::NonCompact(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
