//! Sample covariance, the two toeplitzified estimators and the
//! trigonometric polynomials built from lag sequences.
//!
//! Diagonal averages are computed directly in `O(M²)`. An `O(M log M)`
//! alternative exists (the lag sums are autocorrelations of the rows of `X`,
//! computable by FFT), but the direct sums are exact for oracle comparisons.

use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg::{mat_mul_adj, HermitianMatrix};
use crate::scalar::{c64, pairwise_sum, Scalar};
use crate::spectral::ToeplitzHerm;
use crate::synth::DataMatrix;

/// `S = N⁻¹ X Xᴴ`.
pub fn sample_cov<T: Scalar>(x: &DataMatrix<T>) -> Result<HermitianMatrix<T>> {
    let n = x.n();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sample covariance needs N >= 1".into(),
        ));
    }
    let mut s = mat_mul_adj(x.entries.as_ref(), x.entries.as_ref());
    let inv_n = 1.0 / n as f64;
    for j in 0..s.ncols() {
        for i in j..s.nrows() {
            s[(i, j)] = s[(i, j)].scale(inv_n);
        }
    }
    Ok(HermitianMatrix::from_lower(s))
}

/// A toeplitzified estimate `(r̂_0, …, r̂_{M-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzEstimate<T: Scalar> {
    pub r_hat: ToeplitzHerm<T>,
    pub biased: bool,
    /// Set when the lags were divided by `ξ_N`.
    pub xi_used: Option<f64>,
}

impl<T: Scalar> ToeplitzEstimate<T> {
    pub fn lags(&self) -> &[T] {
        self.r_hat.lags()
    }

    pub fn dim(&self) -> usize {
        self.r_hat.dim()
    }

    pub fn to_dense(&self) -> HermitianMatrix<T> {
        self.r_hat.to_dense()
    }

    /// The estimate of `R_M` itself, `r̂_k / ξ_N`.
    pub fn normalized(&self, xi: f64) -> Self {
        Self {
            r_hat: self.r_hat.scaled(1.0 / xi),
            biased: self.biased,
            xi_used: Some(xi),
        }
    }
}

/// Averages the diagonals of `S`: `r̂_k = (M-k)⁻¹ Σ_i S_{i+k,i}`, or divided
/// by `M` when `biased`. Only the lower triangle is read.
pub fn toeplitzify<T: Scalar>(s: &HermitianMatrix<T>, biased: bool) -> ToeplitzEstimate<T> {
    let m = s.dim();
    let entries = s.entries();
    let mut diagonal = Vec::with_capacity(m);
    let lags = (0..m)
        .map(|k| {
            diagonal.clear();
            diagonal.extend((0..m - k).map(|i| entries[(i + k, i)]));
            let sum = pairwise_sum(&diagonal);
            let count = (if biased { m } else { m - k }) as f64;
            T::from_parts(sum.re() / count, sum.im() / count)
        })
        .collect::<Vec<T>>();
    ToeplitzEstimate {
        r_hat: ToeplitzHerm::new(lags).expect("diagonal of a Hermitian matrix is real"),
        biased,
        xi_used: None,
    }
}

/// `Υ_M(θ) = Σ_{|n|<M} r_n e^{inθ}` for a Hermitian lag sequence (so the value
/// is real).
pub fn upsilon<T: Scalar>(lags: &[T], theta: f64) -> f64 {
    weighted_symbol(lags, theta, |_| 1.0)
}

/// The Fejér mean `Υᵇ_M(θ) = Σ_{|n|<M} (1 - |n|/M) r_n e^{inθ}`.
pub fn upsilon_fejer<T: Scalar>(lags: &[T], theta: f64) -> f64 {
    let m = lags.len() as f64;
    weighted_symbol(lags, theta, |n| 1.0 - n as f64 / m)
}

fn weighted_symbol<T: Scalar>(lags: &[T], theta: f64, weight: impl Fn(usize) -> f64) -> f64 {
    let Some(first) = lags.first() else {
        return 0.0;
    };
    let terms: Vec<f64> = lags
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, r)| {
            let phase = c64::new((n as f64 * theta).cos(), (n as f64 * theta).sin());
            2.0 * weight(n) * (r.to_c64() * phase).re
        })
        .collect();
    first.re() * weight(0) + pairwise_sum(&terms)
}

/// `X` as an `M×N` matrix is convenient for tests and callers holding raw data.
pub fn sample_cov_of<T: Scalar>(x: &Mat<T>) -> Result<HermitianMatrix<T>> {
    sample_cov(&DataMatrix::new(x.clone(), Default::default()))
}
