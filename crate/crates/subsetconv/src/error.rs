use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice order mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("lattice order {0} exceeds the supported maximum of {1}")]
    OrderTooLarge(u32, u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("parse error at index {index}: {message}")]
    Parse { index: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}
