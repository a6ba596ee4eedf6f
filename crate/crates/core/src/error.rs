use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input lies outside the domain of the operation, e.g. a zero
    /// temperature handed to a Boltzmann-weight routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters sit exactly on a ground-state level crossing.
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
