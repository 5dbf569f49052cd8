use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("row index {index} out of range for {rows} rows")]
    RowIndexOutOfRange { index: usize, rows: usize },

    #[error("orthonormal basis already spans R^{dim} but the residual is nonzero")]
    BasisFull { dim: usize },

    #[error("degenerate direction: projection residual below the drop tolerance")]
    DegenerateDirection,

    #[error(
        "dimension exhausted: the construction needs ambient dimension > {needed}, have {have}"
    )]
    DimensionExhausted { needed: usize, have: usize },

    #[error("instance too small: {inequality} fails; minimal feasible {param} is {minimum}")]
    InstanceTooSmall {
        inequality: String,
        param: &'static str,
        minimum: u64,
    },

    #[error("infeasible input: {0}")]
    Infeasible(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("oracle kind mismatch: {0}")]
    KindMismatch(&'static str),

    #[error("query budget exhausted after {budget} responses")]
    BudgetExhausted { budget: usize },

    #[error("invalid transcript: {0}")]
    InvalidTranscript(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
