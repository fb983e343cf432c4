use thiserror::Error;

/// Errors raised by the regression core (datasets, configuration, inference).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LackiError {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("non-finite value in {context} at row {row}, column {column}")]
    NonFinite {
        context: &'static str,
        row: usize,
        column: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("prediction undefined: {0}")]
    PredictionUndefined(String),
}

pub type Result<T> = std::result::Result<T, LackiError>;
