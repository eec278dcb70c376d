use thiserror::Error;

/// Errors surfaced by every layer of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller passed arguments that violate an operation's preconditions.
    #[error("usage error: {0}")]
    Usage(String),
    /// Arithmetic outside the operation's domain, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input bytes or streams that do not decode.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// An exhaustive routine was asked to enumerate too much.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Code or protocol parameters that cannot coexist (e.g. block length above q).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Peers disagree on the family, or a message arrived out of phase.
    #[error("protocol error: {0}")]
    Protocol(String),
    /// The requested protocol variant needs a property the family lacks.
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    /// Error-and-erasure decoding exceeded its budget.
    #[error("decoding failed: budget exceeded")]
    DecodeFailure,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
