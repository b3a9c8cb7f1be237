use thiserror::Error;

/// Library error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its contract (hard precondition, not a soft constraint).
    #[error("invalid parameter: {0}")]
    Param(String),
    /// Frequency grids are incompatible (odd size, mismatched filters, non-divisible resample).
    #[error("grid mismatch: {0}")]
    Grid(String),
    /// Signal or coefficient shapes do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// Malformed or unsupported image data.
    #[error("malformed image: {0}")]
    Image(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
    pub fn grid(msg: impl Into<String>) -> Self {
        Error::Grid(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn image(msg: impl Into<String>) -> Self {
        Error::Image(msg.into())
    }
}
