use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CopeError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CopeError {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            CopeError::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CopeError>;
