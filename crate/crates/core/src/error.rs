use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point at index {index} lies outside the domain")]
    Domain { index: i64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("path endpoints do not match at index {index} (gap {gap:e})")]
    EndpointMismatch { index: i64, gap: f64 },

    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("window too small: need half-width at least {required}, got {available}")]
    WindowTooSmall { required: usize, available: usize },

    #[error("stage budget exhausted after {stages} stages (max length {max_length:e})")]
    Budget { stages: usize, max_length: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
