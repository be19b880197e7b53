use thiserror::Error;

/// Errors raised by the library. The variant decides the CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: mismatched sizes, incompatible rings, malformed values.
    #[error("usage error: {0}")]
    Usage(String),
    /// A mathematically undefined request (inverting zero, exp of a series with a constant term).
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested window cannot be met from the precision carried by the inputs.
    #[error("precision error: {0}")]
    Precision(String),
    /// A fractional token has no pinned image under the change of variables.
    #[error("convention error: {0}")]
    Convention(String),
    /// A cost guard was exceeded.
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
