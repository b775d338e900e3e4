use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Error)]
pub enum Error {
    /// An element, ideal or functional that does not belong to the model.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Missing or inconsistent run configuration, such as an absent coordinate cap.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
