use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the clustering pipeline and its file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate segment id {0}")]
    DuplicateId(u64),

    #[error("duplicate index {0}")]
    DuplicateIndex(usize),

    #[error("index {index} out of range for {len} objects")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("labels must be present on all segments or on none")]
    PartialLabels,

    #[error("segment {0} has no frames")]
    EmptySegment(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("distance between objects {i} and {j} failed: {source}")]
    PairDistance {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("subset of {size} objects exceeds the occupancy cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
