//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown host `{0}`")]
    UnknownHost(String),

    #[error("unknown address `{0}`")]
    UnknownAddress(String),

    #[error("malformed action: {0}")]
    MalformedAction(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("trace step out of order: expected turn {expected}, got {got}")]
    OutOfOrderTurn { expected: u32, got: u32 },

    #[error("malformed observation: {0}")]
    MalformedObservation(String),

    #[error("bandit update for unseen window key `{0}`")]
    UnseenWindowKey(String),

    #[error("topology error: {0}")]
    Topology(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
