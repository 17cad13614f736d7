use thiserror::Error;

/// Errors produced by the numerical kernels and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("iteration did not converge: {0}")]
    NumericalFailure(String),
    #[error("spectrum too degenerate: min gap {gap:.3e} below threshold {threshold:.3e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },
    #[error("kernel is not one-dimensional: second singular value {0:.3e}")]
    RankDeficient(f64),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("contour passes too close to an eigenvalue (distance {dist:.3e} < {limit:.3e})")]
    ContourTooClose { dist: f64, limit: f64 },
    #[error("grid point collides with an eigenvalue (smallest singular value {0:.3e})")]
    GridUnderflow(f64),
    #[error("fixed point did not converge: residual {0:.3e}")]
    NonConvergence(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quantile outside the support of the density")]
    QuantileOutOfSupport,
    #[error("insufficient data for fit: {0}")]
    InsufficientData(String),
    #[error("insufficient samples: got {got}, need {need}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("matrix is not unitary: deviation {0:.3e}")]
    NonUnitary(f64),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
