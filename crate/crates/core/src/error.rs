use thiserror::Error;

use crate::edge::Edge;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("hypothesis fails at edge {edge:?}: |e ∩ Y| = {meet} < 2")]
    Hypothesis { edge: Edge, meet: usize },

    #[error("component reduction failed: {first:?} and {second:?} induce different components")]
    ReductionFailed { first: Edge, second: Edge },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
