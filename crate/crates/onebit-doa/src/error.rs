//! Error type shared by all fallible operations in the crate.

use thiserror::Error;

/// Crate-wide error. The three variants map to the three classes of
/// failure a caller can meaningfully distinguish: inputs outside an
/// operation's mathematical domain, structurally malformed calls, and
/// numerical routines that failed to produce a usable result.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The call itself is malformed: wrong tag, mismatched dimensions,
    /// empty input where data is required.
    #[error("usage error: {0}")]
    Usage(String),
    /// A numerical routine failed (e.g. an eigensolver did not converge).
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
