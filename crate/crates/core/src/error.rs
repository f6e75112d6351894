use thiserror::Error;

/// Errors raised by the linear-algebra kernel, the samplers and the analytic layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is numerically rank deficient (pivot {pivot:e} below {threshold:e})")]
    RankDeficient { pivot: f64, threshold: f64 },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("size {size} does not factor as {dim_a} x {dim_b}")]
    NotFactorable {
        size: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("invalid ensemble specification: {0}")]
    InvalidSpec(String),

    #[error("state vector of {amplitudes} amplitudes exceeds the limit of {limit}")]
    SizeGuard { amplitudes: usize, limit: usize },

    #[error("environment-deficient state: reduced state has smallest eigenvalue {0:e}")]
    EnvironmentDeficient(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("Gamma function pole at {0}")]
    GammaPole(f64),

    #[error("hypergeometric series does not converge: {0}")]
    SeriesDivergence(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
