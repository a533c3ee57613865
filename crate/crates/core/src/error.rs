//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by parsers, model fitting, and labeling operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A line failed to parse; carries the 1-based line number and the
    /// offending field.
    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: &'static str,
        message: String,
    },

    /// A line parsed but violates a schema invariant.
    #[error("line {line}: {message}")]
    Invariant { line: usize, message: String },

    /// An operation was invoked with arguments outside its contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A path references a host that is not a node of the access graph.
    #[error("host {0} is not a node of the access graph")]
    UnknownHost(u64),

    /// A predicted key has no entry in the label map.
    #[error("predicted key `{0}` has no label entry")]
    MissingLabel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, field: &'static str, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field,
            message: message.into(),
        }
    }

    pub(crate) fn invariant(line: usize, message: impl Into<String>) -> Self {
        Error::Invariant {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
