use thiserror::Error;

use crate::quadrature::QuadDiagnostics;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A parameter lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or inconsistent input (dimension mismatch, bad support, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// An improper integral grows without bound along its truncation sequence.
    #[error("divergent integral: {0}")]
    Divergent(String),
    /// Quadrature or sampling could not certify the requested tolerance.
    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        diagnostics: QuadDiagnostics,
    },
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
