use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown emotion label {0:?}")]
    UnknownLabel(String),

    #[error("{path}: missing column(s) {missing:?}; available headers: {available:?}")]
    MissingColumns {
        path: PathBuf,
        missing: Vec<String>,
        available: Vec<String>,
    },

    #[error("class {label} has {available} tweets, {required} required")]
    InsufficientClass {
        label: String,
        available: usize,
        required: usize,
    },

    #[error("duplicate tweet id {0:?} with differing content")]
    DuplicateId(String),

    #[error("cannot fit TF-IDF: every training document is empty")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("training data must contain both +1 and -1 labels")]
    SingleClass,

    #[error("SMO did not converge after {iterations} iterations (KKT violation {violation:e})")]
    NotConverged { iterations: usize, violation: f64 },

    #[error("negative feature value {value} at column {column}")]
    NegativeFeature { column: usize, value: f64 },

    #[error("invalid log-probability record {id:?}: {message}")]
    InvalidRecord { id: String, message: String },

    #[error("stream mismatch: {0}")]
    StreamMismatch(String),

    #[error("nothing to evaluate")]
    EmptyEvaluation,

    #[error("{0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
