//! Whitening of the sample covariance by a toeplitzified estimate, the
//! Marchenko–Pastur reference law and spike detection / estimation.

use faer::Mat;

use crate::error::{Error, Result};
use crate::estimators::{sample_cov, toeplitzify};
use crate::linalg::{mat_adj_mul, mat_mul, HermitianMatrix};
use crate::scalar::Scalar;
use crate::synth::{scale_columns, ColumnCovariance, DataMatrix, Simulator};

pub const DEFAULT_K_MAX: usize = 50;

/// Which row covariance was used to whiten.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhitenSource {
    UnbiasedWhiten,
    BiasedWhiten,
    /// Oracle: `M⁻¹ C^{1/2} Zᴴ Z C^{1/2}`, no row correlation at all.
    IdealRid,
}

/// An `N×N` whitened sample covariance with aspect ratio `c = N/M`.
#[derive(Debug, Clone)]
pub struct WhitenedCov<T: Scalar> {
    pub matrix: HermitianMatrix<T>,
    pub c: f64,
    pub source: WhitenSource,
}

impl<T: Scalar> WhitenedCov<T> {
    /// Eigenvalues, largest first.
    pub fn eigenvalues_desc(&self) -> Result<Vec<f64>> {
        let mut v = self.matrix.eigenvalues()?.to_vec();
        v.reverse();
        Ok(v)
    }
}

/// `Λ^{-1/2} Vᴴ` for `R̂ = V Λ Vᴴ`, so that `R̂⁻¹ = Wᴴ W`.
fn whitening_factor<T: Scalar>(rhat: &HermitianMatrix<T>) -> Result<Mat<T>> {
    rhat.check_pd()?;
    let e = rhat.eigen()?;
    let m = rhat.dim();
    Ok(Mat::from_fn(m, m, |i, j| {
        e.vectors[(j, i)].conj().scale(1.0 / e.values[i].sqrt())
    }))
}

/// `S_w = M⁻¹ Xᴴ R̂⁻¹ X` for a positive definite estimate `R̂` of the row
/// covariance.
pub fn whitened_cov<T: Scalar>(
    x: &DataMatrix<T>,
    rhat: &HermitianMatrix<T>,
    source: WhitenSource,
) -> Result<WhitenedCov<T>> {
    let m = x.m();
    if rhat.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "estimate is {0}x{0} but X has {m} rows",
            rhat.dim()
        )));
    }
    let w = whitening_factor(rhat)?;
    let y = mat_mul(w.as_ref(), x.entries.as_ref());
    Ok(WhitenedCov {
        matrix: scaled_gram(&y, 1.0 / m as f64),
        c: x.n() as f64 / m as f64,
        source,
    })
}

/// `S_Rid = M⁻¹ C^{1/2} Zᴴ Z C^{1/2}`.
pub fn ideal_cov<T: Scalar>(z: &Mat<T>, c: &ColumnCovariance) -> Result<WhitenedCov<T>> {
    if c.n() != z.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Z has {} columns, C has dimension {}",
            z.ncols(),
            c.n()
        )));
    }
    let mut zc = z.clone();
    scale_columns(&mut zc, &c.diag());
    Ok(WhitenedCov {
        matrix: scaled_gram(&zc, 1.0 / z.nrows() as f64),
        c: z.ncols() as f64 / z.nrows() as f64,
        source: WhitenSource::IdealRid,
    })
}

/// `M×M` dual `N⁻¹ R̂^{-1/2} X C Xᴴ R̂^{-1/2}`; its aspect ratio is `M/N`.
pub fn dual_whitened_cov<T: Scalar>(
    x: &DataMatrix<T>,
    rhat: &HermitianMatrix<T>,
    c: &[f64],
    source: WhitenSource,
) -> Result<WhitenedCov<T>> {
    if c.len() != x.n() {
        return Err(Error::DimensionMismatch(format!(
            "X has {} columns, C has dimension {}",
            x.n(),
            c.len()
        )));
    }
    let s = rhat.inv_sqrt()?;
    let mut y = mat_mul(s.entries(), x.entries.as_ref());
    scale_columns(&mut y, c);
    let yh = y.adjoint().to_owned();
    Ok(WhitenedCov {
        matrix: scaled_gram(&yh, 1.0 / x.n() as f64),
        c: x.m() as f64 / x.n() as f64,
        source,
    })
}

/// `scale · Yᴴ Y`.
fn scaled_gram<T: Scalar>(y: &Mat<T>, scale: f64) -> HermitianMatrix<T> {
    let mut g = mat_adj_mul(y.as_ref(), y.as_ref());
    for j in 0..g.ncols() {
        for i in j..g.nrows() {
            g[(i, j)] = g[(i, j)].scale(scale);
        }
    }
    HermitianMatrix::from_lower(g)
}

/// Marchenko–Pastur support edges `(1 ± √c)²`.
pub fn mp_edges(c: f64) -> (f64, f64) {
    let s = c.sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

/// Absolutely continuous part of the Marchenko–Pastur law with ratio `c`.
pub fn mp_density(c: f64, lambda: f64) -> f64 {
    let (lo, hi) = mp_edges(c);
    if lambda <= lo || lambda >= hi || lambda <= 0.0 {
        return 0.0;
    }
    ((hi - lambda) * (lambda - lo)).sqrt() / (2.0 * std::f64::consts::PI * c * lambda)
}

/// Point mass at zero, `1 − 1/c` when `c > 1`.
pub fn mp_atom(c: f64) -> f64 {
    if c > 1.0 {
        1.0 - 1.0 / c
    } else {
        0.0
    }
}

/// Almost-sure limit `σ²(α + cα/(α − 1))` of a sample spike.
pub fn spike_limit(alpha: f64, c: f64, sigma2: f64) -> Result<f64> {
    let threshold = 1.0 + c.sqrt();
    if alpha <= threshold {
        return Err(Error::SubcriticalSpike { alpha, threshold });
    }
    Ok(sigma2 * (alpha + c * alpha / (alpha - 1.0)))
}

/// Ratio thresholds of the triple test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gammas(pub [f64; 3]);

impl Gammas {
    /// Values calibrated at `M = 833, N = 500` (time × series) with `a = 0.7`.
    pub const REFERENCE: Gammas = Gammas([1.04418, 1.0353, 1.0294]);
}

/// `λ_i / λ_{i+1}` for `i = 1, 2, 3` of a descending spectrum.
pub fn leading_ratios(eigs_desc: &[f64]) -> Result<[f64; 3]> {
    if eigs_desc.len() < 4 {
        return Err(Error::IndexOutOfRange {
            index: 3,
            len: eigs_desc.len(),
        });
    }
    check_positive(&eigs_desc[..4])?;
    Ok([
        eigs_desc[0] / eigs_desc[1],
        eigs_desc[1] / eigs_desc[2],
        eigs_desc[2] / eigs_desc[3],
    ])
}

fn check_positive(eigs: &[f64]) -> Result<()> {
    match eigs.iter().position(|&l| l.is_nan() || l <= 0.0) {
        Some(index) => Err(Error::NonPositiveEigenvalue {
            index,
            value: eigs[index],
        }),
        None => Ok(()),
    }
}

/// Eigenvalues (descending) of `S_w` for one white-model replicate, with `R̂`
/// the unbiased estimate rescaled by nothing (`ξ_N = 1` under `C = I`).
pub fn white_spectrum<T: Scalar>(sim: &Simulator<T>, replicate: u64) -> Result<Vec<f64>> {
    let c = ColumnCovariance::identity(sim.n());
    let (_, x) = sim.draw(&c, replicate)?;
    let est = toeplitzify(&sample_cov(&x)?, false);
    whitened_cov(&x, &est.to_dense(), WhitenSource::UnbiasedWhiten)?.eigenvalues_desc()
}

/// Thresholds as the largest leading ratios over white-model replicates.
pub fn gammas_from_ratios(ratios: &[[f64; 3]]) -> Gammas {
    let mut g = [1.0f64; 3];
    for r in ratios {
        for i in 0..3 {
            g[i] = g[i].max(r[i]);
        }
    }
    Gammas(g)
}

/// Calibrates `γ_1..3` through the full pipeline (sample, toeplitzify,
/// whiten) under `C = I`; replicates `0..reps` of the simulator's seed.
pub fn calibrate_gammas<T: Scalar>(
    sim: &Simulator<T>,
    reps: usize,
    threads: Option<usize>,
) -> Result<Gammas> {
    if reps == 0 {
        return Err(Error::InvalidParameter(
            "calibration needs reps >= 1".into(),
        ));
    }
    let ratios = crate::montecarlo::run_replicates(reps, threads, |rep| {
        leading_ratios(&white_spectrum(sim, rep)?)
    })?;
    Ok(gammas_from_ratios(&ratios))
}

/// Smallest `k ≥ 0` with `λ_{k+i}/λ_{k+i+1} < γ_i` for `i = 1, 2, 3`.
pub fn detect_p(eigs_desc: &[f64], gammas: &Gammas, k_max: usize) -> Result<usize> {
    for k in 0..=k_max {
        if k + 4 > eigs_desc.len() {
            break;
        }
        let window = &eigs_desc[k..k + 4];
        check_positive(window)?;
        if (0..3).all(|i| window[i] / window[i + 1] < gammas.0[i]) {
            return Ok(k);
        }
    }
    Err(Error::NoDetection { k_max })
}

/// `σ̂ = √λ_{p̂+1} / (1 + √c)`.
pub fn estimate_sigma(eigs_desc: &[f64], p_hat: usize, c: f64) -> Result<f64> {
    let lambda = *eigs_desc.get(p_hat).ok_or(Error::IndexOutOfRange {
        index: p_hat,
        len: eigs_desc.len(),
    })?;
    check_positive(&[lambda])?;
    Ok(lambda.sqrt() / (1.0 + c.sqrt()))
}

/// Spike strengths by inverting `λ/σ̂² = α + cα/(α−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimates {
    pub values: Vec<f64>,
    /// True where the discriminant was negative and `α̂` was clamped to `1 + √c`.
    pub clamped: Vec<bool>,
}

pub fn estimate_alphas(
    eigs_desc: &[f64],
    p_hat: usize,
    sigma_hat: f64,
    c: f64,
) -> Result<AlphaEstimates> {
    if p_hat > eigs_desc.len() {
        return Err(Error::IndexOutOfRange {
            index: p_hat,
            len: eigs_desc.len(),
        });
    }
    let mut values = Vec::with_capacity(p_hat);
    let mut clamped = Vec::with_capacity(p_hat);
    for &lambda in &eigs_desc[..p_hat] {
        let t = lambda / (sigma_hat * sigma_hat);
        let b = 1.0 - c + t;
        let disc = b * b - 4.0 * t;
        if disc < 0.0 {
            values.push(1.0 + c.sqrt());
            clamped.push(true);
        } else {
            values.push((b + disc.sqrt()) / 2.0);
            clamped.push(false);
        }
    }
    Ok(AlphaEstimates { values, clamped })
}

/// Detection and estimation output for one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeReport {
    pub p_hat: usize,
    pub sigma_hat: f64,
    pub alpha_hats: Vec<f64>,
    pub clamped: Vec<bool>,
    pub gammas: Gammas,
    pub eigenvalues: Vec<f64>,
}

pub fn spike_report(eigs_desc: Vec<f64>, gammas: Gammas, c: f64) -> Result<SpikeReport> {
    let p_hat = detect_p(&eigs_desc, &gammas, DEFAULT_K_MAX)?;
    let sigma_hat = estimate_sigma(&eigs_desc, p_hat, c)?;
    let alphas = estimate_alphas(&eigs_desc, p_hat, sigma_hat, c)?;
    Ok(SpikeReport {
        p_hat,
        sigma_hat,
        alpha_hats: alphas.values,
        clamped: alphas.clamped,
        gammas,
        eigenvalues: eigs_desc,
    })
}

/// Eigenvectors of the `p` largest eigenvalues, as columns, each with its
/// largest-modulus coordinate made real and positive.
pub fn top_eigenvectors<T: Scalar>(s: &HermitianMatrix<T>, p: usize) -> Result<Mat<T>> {
    let e = s.eigen()?;
    let n = s.dim();
    if p > n {
        return Err(Error::IndexOutOfRange { index: p, len: n });
    }
    let mut v = Mat::<T>::zeros(n, p);
    for k in 0..p {
        let col = n - 1 - k;
        let pivot = (0..n)
            .max_by(|&a, &b| {
                e.vectors[(a, col)]
                    .abs2()
                    .total_cmp(&e.vectors[(b, col)].abs2())
            })
            .unwrap_or(0);
        let z = e.vectors[(pivot, col)];
        let phase = z.conj().scale(1.0 / z.modulus());
        for i in 0..n {
            v[(i, k)] = e.vectors[(i, col)] * phase;
        }
    }
    Ok(v)
}

/// `min_{|ϱ|=1} ‖u − ϱv‖` for unit vectors.
pub fn phase_aligned_distance<T: Scalar>(u: &[T], v: &[T]) -> f64 {
    let inner = u
        .iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.conj() * *b)
        .modulus();
    (2.0 - 2.0 * inner).max(0.0).sqrt()
}

/// Principal components of `X* = Xᴴ`: `X̂_w* = (v_1 … v_p)ᴴ X*` (`p×M`) and the
/// standardized `Ŷ_w = X̂_w* R̂^{-1/2}`.
pub fn pca_compress<T: Scalar>(
    x: &DataMatrix<T>,
    sw: &WhitenedCov<T>,
    p_hat: usize,
    rhat_inv_sqrt: &HermitianMatrix<T>,
) -> Result<(Mat<T>, Mat<T>)> {
    if p_hat == 0 {
        return Err(Error::EmptySignal);
    }
    if sw.matrix.dim() != x.n() || rhat_inv_sqrt.dim() != x.m() {
        return Err(Error::DimensionMismatch(format!(
            "X is {}x{}, S_w is {2}x{2}, R̂^(-1/2) is {3}x{3}",
            x.m(),
            x.n(),
            sw.matrix.dim(),
            rhat_inv_sqrt.dim()
        )));
    }
    let v = top_eigenvectors(&sw.matrix, p_hat)?;
    // (X V)ᴴ = Vᴴ Xᴴ
    let xv = mat_mul(x.entries.as_ref(), v.as_ref());
    let xw = xv.adjoint().to_owned();
    let yw = mat_mul(xw.as_ref(), rhat_inv_sqrt.entries());
    Ok((xw, yw))
}
