use thiserror::Error;

/// Errors raised by the operator, representation and field-theory routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid cutoff: n_max must be at least 1, got {0}")]
    InvalidCutoff(u32),

    #[error("interior margin {margin} must be smaller than n_max = {n_max}")]
    MarginTooLarge { margin: u32, n_max: u32 },

    #[error("interior margin {margin} is below the required minimum {required}")]
    MarginTooSmall { margin: u32, required: u32 },

    #[error("occupation {counts:?} exceeds the per-mode cutoff {n_max}")]
    OccupationOutOfRange { counts: [u32; 4], n_max: u32 },

    #[error("flat index {index} is outside a space of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: u32, right: u32 },

    #[error("mode {mode} belongs to the {found} basis, expected {expected}")]
    BasisMismatch {
        mode: String,
        found: &'static str,
        expected: &'static str,
    },

    #[error("operator dimension {found} does not match the expected {expected}")]
    DimensionMismatch { found: usize, expected: usize },

    #[error("Hermite order {order} exceeds the evaluator maximum {max}")]
    OrderOutOfRange { order: u32, max: u32 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("quadrature order {order} too low, need at least {required}")]
    QuadratureOrderTooLow { order: usize, required: usize },

    #[error("particle cap {cap} exceeded")]
    ParticleCapExceeded { cap: u32 },

    #[error("particle cap must be at least {required}, got {cap}")]
    InvalidParticleCap { cap: u32, required: u32 },

    #[error("norm leak {leak:.3e} past the interior subspace exceeds threshold {threshold:.3e}")]
    NormLeak { leak: f64, threshold: f64 },

    #[error("transform parameters invalid: {0}")]
    InvalidParameters(String),

    #[error("line {line}: duplicate mode tuple {counts:?}")]
    DuplicateMode { counts: [u32; 4], line: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
