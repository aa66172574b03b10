use thiserror::Error;

use crate::basis::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular matrix: |det| = {abs_det:e} is not above {tolerance:e}")]
    SingularMatrix { abs_det: f64, tolerance: f64 },

    #[error("correction for outcome {k}, sender {sender} is singular (|det| = {abs_det:e})")]
    SingularCorrection {
        k: usize,
        sender: usize,
        abs_det: f64,
    },

    #[error("matrices do not form an orthonormal entangled basis: {}", .0.summary())]
    InvalidBasis(Box<ValidationReport>),

    #[error("parameter {name} = {value} is out of range: {reason}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    UnnormalizedInput { norm_sqr: f64 },

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("state dimension {got} does not match circuit width {width} (expected {expected})")]
    WidthMismatch {
        width: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid state dimension {0}; expected 2, 4 or 8")]
    InvalidDimension(usize),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("unknown circuit id {0:?}")]
    UnknownCircuit(String),

    #[error("unknown basis family {0:?}")]
    UnknownFamily(String),

    #[error("missing required parameter {0}")]
    MissingParam(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
