use thiserror::Error;

/// Errors raised across the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandauError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("ill-conditioned leading coefficient: {0}")]
    IllConditioned(String),
    #[error("inconsistent samples (max deviation {max_deviation:e})")]
    Consistency { max_deviation: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("incomplete genus table, missing entry for u = {0:?}")]
    MissingGenus(Vec<u32>),
    #[error("parse error: {0}")]
    Parse(String),
}

impl LandauError {
    /// Exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            LandauError::Numerical(_) | LandauError::Consistency { .. } | LandauError::IllConditioned(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LandauError>;
