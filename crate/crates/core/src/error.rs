use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A request touched sectors where a truncated operator no longer agrees
    /// with its untruncated counterpart.
    #[error("validity error: {0}")]
    Validity(String),

    #[error("operators live on different truncated spaces")]
    SpaceMismatch,

    #[error("structural error: {0}")]
    Structural(String),

    #[error("calibration failure: {0}")]
    Calibration(String),

    #[error("regression error: {0}")]
    Regression(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
