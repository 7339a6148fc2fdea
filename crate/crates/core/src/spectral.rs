//! Long-range-dependent Toeplitz covariance models and the matrix-analytic
//! primitives built on them.
//!
//! Row covariance entries follow `R[i][j] = r_{i-j}` with `r_{-k} = conj(r_k)`,
//! so the stored lag sequence `(r_0, …, r_{M-1})` is the first column.

use std::f64::consts::PI;

use faer::Mat;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::quadrature::GaussLegendre;
use crate::scalar::{c64, Scalar};

pub const DEFAULT_QUADRATURE_POINTS: usize = 4096;

/// Autocovariance model of an LRD stationary process, parametrized either
/// by its lags or by its spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralModel {
    /// `r_k = (1+|k|)^{-(1-a)}` for `k ≠ 0`, `r_0` as given.
    TimeDomain { a: f64, r0: f64 },
    /// `f(x) = |x|^{-a}` on `[-π, π]`; lags are Fourier coefficients of `f`.
    FrequencyDomain { a: f64, quadrature_points: usize },
}

impl SpectralModel {
    pub fn time_domain(a: f64) -> Result<Self> {
        Self::time_domain_with_r0(a, 1.0)
    }

    pub fn time_domain_with_r0(a: f64, r0: f64) -> Result<Self> {
        let model = SpectralModel::TimeDomain { a, r0 };
        model.validate()?;
        Ok(model)
    }

    pub fn frequency_domain(a: f64) -> Result<Self> {
        Self::frequency_domain_with_points(a, DEFAULT_QUADRATURE_POINTS)
    }

    pub fn frequency_domain_with_points(a: f64, quadrature_points: usize) -> Result<Self> {
        let model = SpectralModel::FrequencyDomain {
            a,
            quadrature_points,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn a(&self) -> f64 {
        match *self {
            SpectralModel::TimeDomain { a, .. } | SpectralModel::FrequencyDomain { a, .. } => a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.a();
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "LRD exponent a must lie in (0, 1), got {a}"
            )));
        }
        match *self {
            SpectralModel::TimeDomain { r0, .. } if !(r0 > 0.0 && r0.is_finite()) => Err(
                Error::InvalidParameter(format!("r0 must be positive, got {r0}")),
            ),
            SpectralModel::FrequencyDomain {
                quadrature_points: 0,
                ..
            } => Err(Error::InvalidParameter(
                "quadrature_points must be positive".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Lag-`k` autocovariance `r_k` (even in `k`).
    pub fn autocov(&self, k: i64) -> Result<f64> {
        self.validate()?;
        if k.unsigned_abs() >= 1 << 31 {
            return Err(Error::InvalidParameter(format!("lag {k} out of range")));
        }
        let k = k.abs();
        match *self {
            SpectralModel::TimeDomain { a, r0 } => Ok(if k == 0 {
                r0
            } else {
                (1.0 + k as f64).powf(-(1.0 - a))
            }),
            SpectralModel::FrequencyDomain {
                a,
                quadrature_points,
            } => power_law_coefficient(a, k, quadrature_points),
        }
    }

    /// The exact spectral density of the model.
    pub fn density(&self) -> ModelDensity {
        match *self {
            SpectralModel::TimeDomain { a, r0 } => ModelDensity::TimeDomain { a, r0 },
            SpectralModel::FrequencyDomain { a, .. } => ModelDensity::PowerLaw { a },
        }
    }

    /// A lower bound on the spectral density: `r_0 - 2^a + 3^{a-1}` for the
    /// time-domain model (convexity of the lag sequence), `π^{-a}` for the
    /// power law.
    pub fn density_lower_bound(&self) -> f64 {
        match *self {
            SpectralModel::TimeDomain { a, r0 } => r0 - 2f64.powf(a) + 3f64.powf(a - 1.0),
            SpectralModel::FrequencyDomain { a, .. } => PI.powf(-a),
        }
    }
}

/// `(1/π) ∫_0^π x^{-a} cos(kx) dx` with a refinement check.
fn power_law_coefficient(a: f64, k: i64, quadrature_points: usize) -> Result<f64> {
    let gl = GaussLegendre::new(16);
    let coarse = power_law_integral(&gl, a, k, quadrature_points, 1);
    let fine = power_law_integral(&gl, a, k, quadrature_points, 2);
    let relative_change = (coarse - fine).abs() / fine.abs().max(1e-300);
    if relative_change > 1e-8 {
        return Err(Error::QuadratureNonConvergence {
            lag: k,
            relative_change,
        });
    }
    Ok(fine / PI)
}

fn power_law_integral(gl: &GaussLegendre, a: f64, k: i64, points: usize, refine: usize) -> f64 {
    let kf = k as f64;
    let delta = PI / points as f64;
    // [0, δ] with u = x^{1-a}: x^{-a} dx = du / (1-a), removing the singularity.
    let p = 1.0 / (1.0 - a);
    let u_max = delta.powf(1.0 - a);
    let near_panels = ((kf * delta * 2.0).ceil() as usize).max(4) * refine;
    let mut total = 0.0;
    for i in 0..near_panels {
        let lo = u_max * i as f64 / near_panels as f64;
        let hi = u_max * (i + 1) as f64 / near_panels as f64;
        total += gl.integrate(lo, hi, |u: f64| (kf * u.powf(p)).cos()) / (1.0 - a);
    }
    // [δ, π]: geometric panels out of the singular region, then uniform panels
    // short enough to resolve cos(kx).
    let h = (PI / 16.0).min(1.0 / (kf + 1.0)) / refine as f64;
    let mut lo = delta;
    while lo < PI {
        let width = (lo / refine as f64).min(h);
        let hi = (lo + width).min(PI);
        total += gl.integrate(lo, hi, |x: f64| x.powf(-a) * (kf * x).cos());
        lo = hi;
    }
    total
}

/// An even, `2π`-periodic spectral density.
pub trait SpectralDensity: Sync {
    fn eval(&self, theta: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> SpectralDensity for F {
    fn eval(&self, theta: f64) -> f64 {
        self(theta)
    }
}

/// Closed-form densities of the configured models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelDensity {
    PowerLaw {
        a: f64,
    },
    /// Density of `r_k = (1+|k|)^{-(1-a)}`, `r_0` as given.
    TimeDomain {
        a: f64,
        r0: f64,
    },
    Constant(f64),
}

impl SpectralDensity for ModelDensity {
    fn eval(&self, theta: f64) -> f64 {
        let t = fold_angle(theta);
        match *self {
            ModelDensity::PowerLaw { a } => {
                if t == 0.0 {
                    f64::INFINITY
                } else {
                    t.powf(-a)
                }
            }
            ModelDensity::TimeDomain { a, r0 } => {
                if t == 0.0 {
                    return f64::INFINITY;
                }
                // f(θ) = r_0 + 2 Re Σ_{k≥1} (k+1)^{-s} e^{ikθ} = r_0 + 2 Re[e^{-iθ} Σ_{n≥2} n^{-s} e^{inθ}]
                let series = power_series_from_two(1.0 - a, t);
                let shift = c64::new(t.cos(), -t.sin());
                r0 + 2.0 * (shift * series).re
            }
            ModelDensity::Constant(c) => c,
        }
    }
}

/// Maps `θ` to `|θ|` folded into `[0, π]`.
fn fold_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        2.0 * PI - t
    } else {
        t
    }
}

/// `Σ_{n≥2} n^{-s} e^{inθ}` for `s ∈ (0,1)`, `θ ∈ (0, π]`.
///
/// Direct summation up to `K`, then the tail through
/// `n^{-s} = Γ(s)^{-1} ∫_0^∞ t^{s-1} e^{-nt} dt`, which turns it into
/// `Γ(s)^{-1} ∫_0^∞ t^{s-1} (z e^{-t})^{K+1} / (1 - z e^{-t}) dt` with `z = e^{iθ}`.
/// `K` is chosen so that `K |1 - z| ≥ 8`, keeping the tail integrand smooth.
fn power_series_from_two(s: f64, theta: f64) -> c64 {
    let gap = 2.0 * (0.5 * theta).sin();
    let k_cut = ((8.0 / gap).ceil() as usize).max(64);
    let mut partial = c64::new(0.0, 0.0);
    for n in 2..=k_cut {
        let w = (n as f64).powf(-s);
        let phase = n as f64 * theta;
        partial += c64::new(w * phase.cos(), w * phase.sin());
    }

    let gl = GaussLegendre::new(24);
    let kp1 = (k_cut + 1) as f64;
    let z = c64::new(theta.cos(), theta.sin());
    let z_pow = c64::new((kp1 * theta).cos(), (kp1 * theta).sin());
    let kernel = |t: f64| -> c64 {
        let decay = (-t).exp();
        z_pow * (-kp1 * t).exp() / (c64::new(1.0, 0.0) - z * decay)
    };
    // First panel in u = t^s (t^{s-1} dt = du/s); later panels double in width.
    let h = 1.0 / kp1;
    let mut tail: c64 = gl.integrate(0.0, h.powf(s), |u: f64| kernel(u.powf(1.0 / s))) * (1.0 / s);
    let mut lo = h;
    while lo < 64.0 * h {
        let hi = 2.0 * lo;
        tail += gl.integrate(lo, hi, |t: f64| kernel(t) * t.powf(s - 1.0));
        lo = hi;
    }
    partial + tail * (1.0 / libm::tgamma(s))
}

/// Hermitian Toeplitz matrix stored by its lags `(r_0, …, r_{M-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzHerm<T: Scalar> {
    lags: Vec<T>,
}

impl<T: Scalar> ToeplitzHerm<T> {
    /// `r_0` must be real up to roundoff; it is stored exactly real.
    pub fn new(mut lags: Vec<T>) -> Result<Self> {
        let Some(first) = lags.first_mut() else {
            return Err(Error::InvalidParameter(
                "Toeplitz dimension must be >= 1".into(),
            ));
        };
        if first.im().abs() > 1e-10 * first.re().abs().max(1.0) {
            return Err(Error::NotHermitian {
                asymmetry: first.im().abs(),
            });
        }
        *first = T::from_re(first.re());
        Ok(Self { lags })
    }

    pub fn dim(&self) -> usize {
        self.lags.len()
    }

    pub fn lags(&self) -> &[T] {
        &self.lags
    }

    /// `r_k` for any `|k| < M`.
    pub fn lag(&self, k: isize) -> T {
        if k >= 0 {
            self.lags[k as usize]
        } else {
            self.lags[k.unsigned_abs()].conj()
        }
    }

    pub fn to_dense(&self) -> HermitianMatrix<T> {
        let m = self.dim();
        HermitianMatrix::from_lower(Mat::from_fn(m, m, |i, j| self.lag(i as isize - j as isize)))
    }

    /// Lags converted into another field (imaginary parts are dropped when
    /// converting to the real field).
    pub fn to_field<U: Scalar>(&self) -> ToeplitzHerm<U> {
        ToeplitzHerm {
            lags: self
                .lags
                .iter()
                .map(|&r| U::from_parts(r.re(), r.im()))
                .collect(),
        }
    }

    pub fn scaled(&self, by: f64) -> Self {
        Self {
            lags: self.lags.iter().map(|&r| r.scale(by)).collect(),
        }
    }

    /// `T·v` through a circulant embedding of size `2M` and the FFT.
    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        let op = CirculantEmbedding::new(self);
        let input: Vec<c64> = v.iter().map(|x| x.to_c64()).collect();
        Ok(op
            .apply(&input)?
            .into_iter()
            .map(|z| T::from_parts(z.re, z.im))
            .collect())
    }
}

/// A Hermitian Toeplitz matrix embedded in a `2M` circulant, with the
/// circulant's eigenvalues and FFT plans precomputed for repeated products.
pub struct CirculantEmbedding {
    m: usize,
    spectrum: Vec<c64>,
    forward: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inverse: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl CirculantEmbedding {
    pub fn new<T: Scalar>(t: &ToeplitzHerm<T>) -> Self {
        let m = t.dim();
        let size = 2 * m;
        let zero = c64::new(0.0, 0.0);
        // first column of the circulant: r_0..r_{M-1}, 0, conj(r_{M-1})..conj(r_1)
        let mut spectrum = vec![zero; size];
        for (s, l) in spectrum.iter_mut().zip(&t.lags) {
            *s = l.to_c64();
        }
        for k in 1..m {
            spectrum[size - k] = t.lags[k].conj().to_c64();
        }
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        forward.process(&mut spectrum);
        let norm = 1.0 / size as f64;
        for s in &mut spectrum {
            *s *= norm;
        }
        Self {
            m,
            spectrum,
            forward,
            inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn apply(&self, v: &[c64]) -> Result<Vec<c64>> {
        let m = self.m;
        if v.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "Toeplitz of dimension {m} applied to vector of length {}",
                v.len()
            )));
        }
        let mut padded = vec![c64::new(0.0, 0.0); 2 * m];
        padded[..m].copy_from_slice(v);
        self.forward.process(&mut padded);
        for (p, s) in padded.iter_mut().zip(&self.spectrum) {
            *p *= *s;
        }
        self.inverse.process(&mut padded);
        padded.truncate(m);
        Ok(padded)
    }
}

/// `R_M` for a model: lags `r_0, …, r_{M-1}`.
pub fn build_toeplitz(model: &SpectralModel, m: usize) -> Result<ToeplitzHerm<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("dimension M must be >= 1".into()));
    }
    let lags = (0..m as i64)
        .map(|k| model.autocov(k))
        .collect::<Result<Vec<_>>>()?;
    ToeplitzHerm::new(lags)
}

/// Ascending eigenvalues (the support of the empirical spectral distribution).
pub fn esd<T: Scalar>(a: &HermitianMatrix<T>) -> Result<Vec<f64>> {
    Ok(a.eigenvalues()?.to_vec())
}

/// Sorted samples `f(θ_j)`, `θ_j = (j + ½)π / grid`, of the limiting spectral
/// distribution of `R_M`. Densities are even, so the half-period carries the
/// same distribution as `(-π, π)`.
pub fn szego_reference(model: &SpectralModel, m: usize, grid: usize) -> Result<Vec<f64>> {
    if grid < m {
        return Err(Error::InvalidParameter(format!(
            "Szegő grid ({grid}) must be at least M ({m})"
        )));
    }
    let density = model.density();
    Ok(density_samples(&density, grid))
}

/// Sorted samples of an even density on the midpoint grid of `(0, π)`.
pub fn density_samples<D: SpectralDensity + ?Sized>(density: &D, grid: usize) -> Vec<f64> {
    let mut samples: Vec<f64> = (0..grid)
        .map(|j| density.eval((j as f64 + 0.5) * PI / grid as f64))
        .collect();
    samples.sort_by(f64::total_cmp);
    samples
}

/// Two-sample Kolmogorov–Smirnov distance between empirical distributions.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        worst = worst.max((i as f64 / n - j as f64 / m).abs());
    }
    worst
}

/// Quantiles of sorted samples at the given levels, linearly interpolated
/// with sample `i` sitting at level `(i + ½)/n`.
pub fn quantiles(sorted: &[f64], levels: &[f64]) -> Vec<f64> {
    let n = sorted.len();
    levels
        .iter()
        .map(|&p| {
            let pos = (p * n as f64 - 0.5).clamp(0.0, (n - 1) as f64);
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            let frac = pos - lo as f64;
            sorted[lo] * (1.0 - frac) + sorted[hi] * frac
        })
        .collect()
}

/// Outcome of the spectrum-ratio containment check.
#[derive(Debug, Clone)]
pub struct RatioBounds {
    /// Essential infimum of `f1/f2` over the scan grid.
    pub lo: f64,
    /// Essential supremum of `f1/f2` over the scan grid.
    pub hi: f64,
    /// Whether every eigenvalue of `T1·T2⁻¹` lies in `[lo - ε, hi + ε]`, `ε = 1e-8·hi`.
    pub spec_ok: bool,
    /// Ascending eigenvalues of `T1·T2⁻¹`.
    pub eigenvalues: Vec<f64>,
}

/// Checks that `spec(T1·T2⁻¹) ⊂ [ess inf f1/f2, ess sup f1/f2]` where `f1`, `f2`
/// are the (even) symbols of `T1`, `T2`.
///
/// The ratio is scanned on a uniform grid of `(0, π]` refined geometrically
/// towards `θ = 0`, where LRD densities are singular.
pub fn spectrum_ratio_bounds<T, D1, D2>(
    t1: &ToeplitzHerm<T>,
    t2: &ToeplitzHerm<T>,
    f1: &D1,
    f2: &D2,
) -> Result<RatioBounds>
where
    T: Scalar,
    D1: SpectralDensity + ?Sized,
    D2: SpectralDensity + ?Sized,
{
    let m = t1.dim();
    if t2.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "Toeplitz dimensions {} and {}",
            m,
            t2.dim()
        )));
    }
    let grid = (16 * m).max(4096);
    let mut thetas: Vec<f64> = (0..grid)
        .map(|j| (j as f64 + 0.5) * PI / grid as f64)
        .collect();
    thetas.push(PI);
    let depth = ((256 * m) as f64).log2().ceil() as i32;
    thetas.extend((1..=depth).map(|e| PI * 2f64.powi(-e)));

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &theta in &thetas {
        let ratio = f1.eval(theta) / f2.eval(theta);
        if ratio.is_finite() {
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }

    let inv_sqrt = t2.to_dense().inv_sqrt()?;
    let ratio = t1.to_dense().sandwich(&inv_sqrt)?;
    let eigenvalues = ratio.eigenvalues()?.to_vec();
    let eps = 1e-8 * hi.abs();
    let spec_ok = eigenvalues.iter().all(|&l| l >= lo - eps && l <= hi + eps);
    Ok(RatioBounds {
        lo,
        hi,
        spec_ok,
        eigenvalues,
    })
}
