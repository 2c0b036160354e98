use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not essentially distinct: {0}")]
    NotEssentiallyDistinct(String),
    #[error("no primitive part: zero polynomial")]
    NoPrimitivePart,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precision insufficient: {0}")]
    Precision(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
