use thiserror::Error;

use crate::matrix::LinalgError;
use crate::scalar::ScalarError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("truncation caps differ ({0} vs {1})")]
    CapMismatch(usize, usize),
    #[error("level {level} exceeds cap {cap}")]
    LevelExceedsCap { level: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An identity that must hold for generic `t` failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
