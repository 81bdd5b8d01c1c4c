use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("bad expression {expr:?}: {reason}")]
    Expression { expr: String, reason: &'static str },
    #[error("cache entry {path} has format {found:?}, expected {expected:?}")]
    CacheFormat { path: PathBuf, found: String, expected: &'static str },
    #[error("unknown experiment id {0:?}")]
    UnknownExperiment(String),
    #[error(transparent)]
    Core(#[from] driftlap_core::Error),
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
