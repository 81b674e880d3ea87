use thiserror::Error;

/// Errors produced anywhere in the solver suite.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("model assumption violated: {0}")]
    Assumption(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("extraction error: {0}")]
    Extraction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
