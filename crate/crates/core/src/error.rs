use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation is only defined for a narrower class of algebras.
    #[error("{0}")]
    Scope(&'static str),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("module is not a brick (dim End = {end_dim})")]
    NotABrick { end_dim: usize },

    #[error("not a semibrick: {0}")]
    NotASemibrick(crate::homology::SemibrickViolation),

    #[error("oracle infeasible: {0}")]
    Infeasible(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("malformed module document: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
