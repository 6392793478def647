use thiserror::Error;

/// Errors produced by tensor construction, validation and the numerical
/// experiments built on top of them.
#[derive(Error, Debug)]
pub enum Error {
    #[error("shape mismatch: expected {expected} entries for n = {n}, got {got}")]
    Shape {
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: tensor has n = {tensor}, vector has length {vector}")]
    Dimension { tensor: usize, vector: usize },

    #[error("symmetry violation: {0}")]
    Symmetry(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("load error: {0}")]
    Load(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
