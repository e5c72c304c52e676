//! Error type shared across the pipeline.

use std::path::PathBuf;

/// Errors produced by generation, labeling, storage and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its validated range.
    #[error("invalid parameter {name}: {reason}")]
    Param { name: &'static str, reason: String },

    /// Inputs that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A referenced instance id does not exist in the configuration.
    #[error("unknown instance id {0}")]
    UnknownId(u32),

    /// Catalog furniture cannot be packed along the wall.
    #[error("furniture does not fit the wall: {0}")]
    SceneOverflow(String),

    /// A binary file failed structural validation.
    #[error("{path}: bad {what} at byte {offset}")]
    Format {
        path: PathBuf,
        offset: u64,
        what: String,
    },

    /// Manifest and on-disk tree disagree.
    #[error("dataset discrepancies:\n{}", .0.join("\n"))]
    Discrepancy(Vec<String>),

    /// Malformed JSON artifact.
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Param {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 usage, 3 data, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param { .. } => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
