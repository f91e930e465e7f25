use thiserror::Error;

use crate::exprdsl::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not strictly positive")]
    NonPositiveValue(f64),

    #[error("log value {0} is not finite")]
    NonFiniteLog(f64),

    #[error("division by the geometric zero")]
    GeometricZeroDivisor,

    #[error("index {index} out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no qualifying subsequence within window {window}")]
    NoSubsequenceFound { window: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
