use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: about {requested} points requested, cap is {cap}")]
    Capacity { requested: u64, cap: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
