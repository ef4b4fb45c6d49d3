//! Crate-wide error type.  Every fallible public operation returns
//! [`Result`]; values never leave an operation as NaN or infinity without
//! one of these variants explaining why.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// Input outside the mathematical domain of the operation: branch-cut
    /// arguments, invalid shape parameters, points too close to a singular
    /// locus, non-finite inputs.
    Domain(String),
    /// A magnitude exceeded the representable range, even after log-scaling
    /// where the operation supports it.
    Overflow(String),
    /// An iterative process (eigenvalue iteration, adaptive quadrature)
    /// failed to reach its tolerance within its budget.
    NonConvergence(String),
    /// Two estimates with incompatible metadata were combined, or an
    /// estimate does not carry what the operation needs from it.
    Mismatch(String),
    /// Invalid experiment configuration.
    Config(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::NonConvergence(msg) => write!(f, "failed to converge: {msg}"),
            Error::Mismatch(msg) => write!(f, "mismatch: {msg}"),
            Error::Config(msg) => write!(f, "bad configuration: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
