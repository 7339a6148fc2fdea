use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:e} <= tolerance {tolerance:e}")]
    NotPositiveDefinite { min_eigenvalue: f64, tolerance: f64 },
    #[error("matrix is not positive semi-definite: smallest eigenvalue {min_eigenvalue:e} < -{tolerance:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tolerance: f64 },
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigendecomposition failed to converge")]
    EigenFailed,
    #[error(
        "quadrature did not converge for lag {lag}: refinements differ by {relative_change:e}"
    )]
    QuadratureNonConvergence { lag: i64, relative_change: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("spike {alpha} is at or below the detection threshold 1 + sqrt(c) = {threshold}")]
    SubcriticalSpike { alpha: f64, threshold: f64 },
    #[error("no signal count k < {k_max} passes the eigenvalue ratio test")]
    NoDetection { k_max: usize },
    #[error("eigenvalue {index} is not positive ({value:e})")]
    NonPositiveEigenvalue { index: usize, value: f64 },
    #[error("index {index} out of range for {len} eigenvalues")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no signal components to project on (p = 0)")]
    EmptySignal,
}

impl Error {
    /// True for failures of the numerics, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter(_) | Error::DimensionMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
