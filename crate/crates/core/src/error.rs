use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable set mismatch: {left} vs {right}")]
    VarsetMismatch { left: String, right: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("not a semi-invariant: D1 leaves the term {witness}")]
    NotSemiInvariant { witness: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("pipeline inconsistency at degree {degree}: {message}")]
    Pipeline { degree: u32, message: String },

    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn pipeline(degree: u32, msg: impl Into<String>) -> Error {
    Error::Pipeline {
        degree,
        message: msg.into(),
    }
}
