use thiserror::Error;

/// Error type shared across the crate.
///
/// The variants map onto the CLI exit-code classes: `Input` (bad arguments or
/// malformed files), `Capability` (the request is valid but exceeds what the
/// implementation supports, e.g. enumerating N > 24), `Configuration`
/// (an instance cannot be evaluated as configured), `InsufficientData`
/// (a statistic is undefined for the given inputs) and `Internal` (a broken
/// invariant, always a bug).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
