use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (length mismatch, wrong field, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("bit index {position} out of range for vector of {len} bits")]
    Index { position: usize, len: usize },

    /// Parameters cannot be satisfied (not enough min-entropy, field too large, ...).
    #[error("sizing error: {0}")]
    Sizing(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("zero variance: correlation is undefined for a constant series")]
    ZeroVariance,

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Short stable identifier used in machine-readable error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Contract(_) => "contract",
            Error::Index { .. } => "index",
            Error::Sizing(_) => "sizing",
            Error::Construction(_) => "construction",
            Error::Format(_) => "format",
            Error::ZeroVariance => "zero-variance",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn sizing(msg: impl Into<String>) -> Self {
        Error::Sizing(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
