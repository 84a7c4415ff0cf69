use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single field-level diagnostic produced by config validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("{what}: {value} is not divisible by {divisor}")]
    Divisibility { what: &'static str, value: usize, divisor: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange { what: &'static str, index: usize, max: usize },

    #[error("near-zero divisor |{magnitude:e}| at row {row}, column {col}")]
    NearZeroDivisor { row: usize, col: usize, magnitude: f64 },

    #[error("cyclic prefix of {samples} samples is not an integer")]
    NonIntegralCp { samples: f64 },

    #[error("unknown constellation `{0}`")]
    UnknownConstellation(String),

    #[error("sample stream layout mismatch: {0}")]
    Layout(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("range-Doppler map is empty")]
    EmptyMap,

    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  - {e}")).collect::<Vec<_>>().join("\n"))]
    InvalidConfig(Vec<FieldError>),

    #[error("cannot parse configuration: {0}")]
    ConfigParse(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed data: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), message: err.to_string() }
    }

    /// True for errors caused by the user's configuration or input values,
    /// as opposed to failures while running.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParam { .. }
                | Error::Divisibility { .. }
                | Error::IndexOutOfRange { .. }
                | Error::UnknownConstellation(_)
                | Error::InvalidConfig(_)
                | Error::ConfigParse(_)
        )
    }
}
