use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max entry deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("invalid basis family: {0}")]
    InvalidMub(String),

    #[error("{0} is not a prime")]
    NotPrime(usize),

    #[error("invalid witness spec: {0}")]
    InvalidSpec(String),

    #[error("invalid Weyl coefficients: {0}")]
    InvalidCoeffs(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid angle `{0}`")]
    InvalidAngle(String),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("malformed matrix data: {0}")]
    Format(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
