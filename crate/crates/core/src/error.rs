use thiserror::Error;

/// Errors raised by the optimization library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evaluation budget exhausted")]
    BudgetExhausted,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("population too small: need at least {needed}, got {got}")]
    PopulationTooSmall { needed: usize, got: usize },
    #[error("degenerate cell dimensions ({0}, {1})")]
    DegenerateCell(f64, f64),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
