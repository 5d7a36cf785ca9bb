use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unit index {index} out of range for dimension {dim}")]
    UnitIndex { index: usize, dim: usize },

    #[error("hodge partition invalid: {0}")]
    Hodge(String),

    #[error("{what} is degenerate")]
    Singular { what: &'static str },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
