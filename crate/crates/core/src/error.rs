use thiserror::Error;

use crate::group::GroupError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("budget exceeded ({what}); largest completed radius {completed_radius}")]
    Budget { what: String, completed_radius: usize },
    #[error("element {0} is not in the enumerated ball")]
    NotInBall(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("verification failed at clause '{clause}': {detail}")]
    Verification { clause: String, detail: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("statistical failure: {0}")]
    Statistical(String),
    #[error("orbit left the truncation: {0}")]
    Truncation(String),
    #[error("missing dependency: {0}")]
    Dependency(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
