use thiserror::Error;

/// Errors raised while ingesting files or computing metrics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A record could not be decoded or violates a structural invariant.
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: duplicate id {id}")]
    DuplicateId { line: usize, id: String },

    #[error("line {line}: unknown segment {id}")]
    UnknownSegment { line: usize, id: String },

    #[error("segment {id}: {message}")]
    Inconsistent { id: String, message: String },

    #[error("segment mismatch: {left} vs {right}")]
    SegmentMismatch { left: String, right: String },

    #[error("sequence is not a permutation of 1..{len}")]
    NotPermutation { len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("not enough data points: {found} (need at least {needed})")]
    TooFewPoints { found: usize, needed: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Coarse classification used by front ends to choose an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input could not be read or a single file is malformed.
    Input,
    /// Inputs parse individually but disagree with each other.
    Consistency,
}

impl Error {
    pub fn malformed(line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            message: message.into(),
        }
    }

    pub fn inconsistent(id: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Inconsistent {
            id: id.into(),
            message: message.into(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) | Error::Malformed { .. } | Error::DuplicateId { .. } | Error::Config(_) => ErrorKind::Input,
            _ => ErrorKind::Consistency,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
