use thiserror::Error;

/// Errors raised by the counting, enumeration and asymptotic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The call itself is malformed (mismatched limits, unsupported family/method).
    #[error("usage error: {0}")]
    Usage(String),
    /// A resource guard would be exceeded.
    #[error("resource guard exceeded: projected {projected} > limit {limit}")]
    Resource { projected: String, limit: u64 },
    /// An exact-arithmetic invariant failed; this is a bug, never an input problem.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
