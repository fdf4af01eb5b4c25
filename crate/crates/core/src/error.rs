use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the workbench.
///
/// Variants fall into two families: data errors (the input file or table is
/// unusable) and numerical errors (a solver or metric could not produce a
/// value). [`Error::is_data_error`] separates the two for exit-code mapping.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("every horsepower value is missing; nothing to impute from")]
    AllMissing,

    #[error("row {row} still has a missing `{field}` value (impute first)")]
    ResidualMissing { row: usize, field: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("column `{column}` is constant")]
    ConstantColumn { column: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("design matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },

    #[error("coordinate descent did not converge after {sweeps} sweeps (last max change {max_change:e})")]
    CoordinateDescentNotConverged {
        sweeps: usize,
        max_change: f64,
        intercept: f64,
        coefficients: Vec<f64>,
    },

    #[error("Newton iterations did not converge after {iterations} steps (gradient norm {gradient_norm:e})")]
    NewtonNotConverged {
        iterations: usize,
        gradient_norm: f64,
        coefficients: Vec<f64>,
    },

    #[error("SMO reached the iteration cap ({iterations}) with KKT violation {max_violation:e}")]
    SmoIterationCap {
        iterations: usize,
        max_violation: f64,
        dual: Vec<f64>,
    },

    #[error("labels contain a single class; both 0 and 1 are required")]
    SingleClass,

    #[error("target is constant; R² is undefined")]
    ZeroVariance,

    #[error("adjusted R² undefined for n = {n}, p = {p} (needs n > p + 1)")]
    AdjustedR2Undefined { n: usize, p: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True when the error is about the input data rather than the numerics.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::EmptyInput(_)
                | Error::Parse { .. }
                | Error::AllMissing
                | Error::ResidualMissing { .. }
                | Error::Io { .. }
        )
    }
}
