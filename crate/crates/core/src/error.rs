use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by grid construction, transforms, solves and the Bers pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at node ({i}, {j}), z = {z}")]
    NonFinite { i: usize, j: usize, z: Complex64 },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("region {what} leaves the grid square (needs margin {margin})")]
    RegionOutsideGrid { what: String, margin: f64 },

    #[error("invalid Sobolev spec: {0}")]
    InvalidSobolev(String),

    #[error("invalid Beltrami coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("degenerate normalization: |f(1)| = {0:e}")]
    DegenerateNormalization(f64),

    #[error("Neumann iteration stopped after {iterations} steps with update {update:e}")]
    NotConverged { iterations: usize, update: f64 },

    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("singular Bers metric at node ({i}, {j}), z = {z}: |f1 - f2bar| = {separation:e}")]
    Singularity {
        i: usize,
        j: usize,
        z: Complex64,
        separation: f64,
    },

    #[error("FLD1 parse error at line {line}: {msg}")]
    Fld1 { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
