use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the search engine.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated an operation precondition. The message names the condition.
    #[error("rejected input: {0}")]
    InvalidInput(String),

    /// An exact intermediate value would not fit the widest integer type in use.
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Classify(#[from] ClassifyError),

    /// A constructed or loaded payload failed its own verification identities.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("checkpoint {path} does not match this configuration (expected {expected}, found {found})")]
    FingerprintMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("checkpoint {path} is corrupt: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },

    #[error("refusing to overwrite existing output {0} (pass the overwrite flag or resume)")]
    OutputExists(PathBuf),

    #[error("record at line {line} of {path}: {reason}")]
    BadRecord {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Reasons an externally supplied box cannot be turned into a brick witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("not an Euler brick: {0}")]
    NotEulerBrick(String),
    #[error("no odd edge after removing the common factor")]
    NoOddEdge,
    #[error("{0} odd edges after removing the common factor")]
    MultipleOddEdges(usize),
    /// Should be unreachable for a genuine brick; reported as an anomaly.
    #[error("anomaly: no difference-of-squares representation for odd edge {n} with even edge {even_edge}")]
    NoRepresentation { n: u64, even_edge: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
