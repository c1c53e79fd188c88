use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero pivot in tridiagonal elimination at row {row}")]
    ZeroPivot { row: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid coefficients on element {element}: {reason}")]
    InvalidCoefficients { element: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{solver} failed to converge after {iterations} iterations (last update {last_update:.3e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        last_update: f64,
    },

    #[error("non-physical state: {0}")]
    NonPhysical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
