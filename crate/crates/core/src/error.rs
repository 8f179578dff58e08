use thiserror::Error;

/// Errors produced by the motion toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("quaternion is not unit norm (|q| = {norm})")]
    NotUnit { norm: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("class mismatch: {left} vs {right}")]
    ClassMismatch { left: u32, right: u32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("train/test leakage: source id {0} appears in both splits")]
    Leakage(String),
    #[error("line {line}: field `{field}`: {message}")]
    Format {
        line: usize,
        field: String,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
