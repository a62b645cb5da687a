use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("instance too large for exhaustive search: n = {n}, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("total edge weight {0} would risk overflow (must stay below 2^62)")]
    WeightOverflow(u128),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
