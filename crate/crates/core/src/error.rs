use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("infeasible assignment: {uavs} UAVs but only {capacity} BS-beam pairs (L*N)")]
    Infeasible { uavs: usize, capacity: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(transparent)]
    TensorLoad(#[from] TensorLoadError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(vec![msg.into()])
    }
}

/// Failures while reading a channel tensor file.
#[derive(Debug, Error)]
pub enum TensorLoadError {
    #[error("tensor file not found: {}", .0.display())]
    Missing(PathBuf),
    #[error("malformed tensor header: {0}")]
    MalformedHeader(String),
    #[error("tensor dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value at {0}")]
    NonFinite(String),
    #[error("unsupported tensor file version {0}")]
    Version(u16),
    #[error("tensor i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("tensor json: {0}")]
    Json(#[from] serde_json::Error),
}
