//! Toeplitz covariance estimation, diagnostics and whitening for
//! long-range-dependent multivariate time series.
//!
//! The data model is `X = R^{1/2} Z C^{1/2}` with `R` an `M×M` Toeplitz row
//! (time) covariance, `Z` white noise and `C` a diagonal `N×N` column
//! covariance. [`estimators`] toeplitzifies `S = N⁻¹XXᴴ` into an estimate of
//! `R`, [`diagnostics`] measures how close that estimate is, and [`whiten`]
//! uses it to undo the time correlation before spike detection and PCA.

pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod montecarlo;
pub mod quadrature;
pub mod scalar;
pub mod spectral;
pub mod stats;
pub mod synth;
pub mod whiten;

pub use error::{Error, Result};
pub use faer::Mat;
pub use linalg::HermitianMatrix;
pub use scalar::{c64, Scalar};
