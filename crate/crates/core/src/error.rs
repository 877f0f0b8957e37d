use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument undefined at infinity")]
    ArgAtInfinity,
    #[error("point outside the map domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("syntax error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("consistency violation: {0}")]
    Consistency(String),
    #[error("raster too coarse: {0}")]
    Resolution(String),
    #[error("premise not satisfied: {0}")]
    Premise(String),
    #[error("certified violation: {0}")]
    Violation(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
