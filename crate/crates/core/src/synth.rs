//! Random ingredients of `X = R^{1/2} Z C^{1/2}`: noise matrices, diagonal
//! column covariances and signal-plus-noise panels.

use std::fmt;
use std::str::FromStr;

use faer::{Mat, MatRef};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{mat_adj_mul, mat_mul, HermitianMatrix};
use crate::scalar::{c64, Scalar};
use crate::spectral::{build_toeplitz, SpectralModel, ToeplitzHerm};

/// Sub-stream identifiers; every replicate owns an independent stream per tag.
pub mod stream {
    pub const NOISE: u64 = 0;
    pub const SPIKE_COUNT: u64 = 1;
    pub const SPIKE_VALUES: u64 = 2;
    pub const SIGNAL: u64 = 3;
    pub const SIGNAL_NOISE: u64 = 4;
    pub const LOADINGS: u64 = 5;
}

/// Generator for `(seed, replicate, stream)`.
///
/// The ChaCha key holds `seed` and `replicate`, the stream id selects the
/// ChaCha nonce, so draws never depend on scheduling order.
pub fn replicate_rng(seed: u64, replicate: u64, stream_id: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replicate.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream_id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    GaussianReal,
    GaussianComplex,
    SphericalReal,
    SphericalComplex,
}

impl NoiseKind {
    pub fn is_complex(self) -> bool {
        matches!(
            self,
            NoiseKind::GaussianComplex | NoiseKind::SphericalComplex
        )
    }

    pub fn is_spherical(self) -> bool {
        matches!(self, NoiseKind::SphericalReal | NoiseKind::SphericalComplex)
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::GaussianReal => "gaussian-real",
            NoiseKind::GaussianComplex => "gaussian-complex",
            NoiseKind::SphericalReal => "spherical-real",
            NoiseKind::SphericalComplex => "spherical-complex",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-real" => Ok(NoiseKind::GaussianReal),
            "gaussian-complex" => Ok(NoiseKind::GaussianComplex),
            "spherical-real" => Ok(NoiseKind::SphericalReal),
            "spherical-complex" => Ok(NoiseKind::SphericalComplex),
            other => Err(Error::InvalidParameter(format!(
                "unknown noise kind '{other}' (expected gaussian-real, gaussian-complex, spherical-real or spherical-complex)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, seed: u64) -> Self {
        Self { kind, seed }
    }
}

/// `M×N` noise matrix with i.i.d. columns, `E|Z_{mn}|² = 1`.
///
/// Spherical kinds rescale each Gaussian column to norm `√M`. The field `T`
/// must match the complexity of the noise kind.
pub fn sample_noise<T: Scalar>(
    spec: &NoiseSpec,
    m: usize,
    n: usize,
    replicate: u64,
) -> Result<Mat<T>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "noise dimensions must be positive, got {m}x{n}"
        )));
    }
    if spec.kind.is_complex() != T::IS_COMPLEX {
        return Err(Error::InvalidParameter(format!(
            "noise kind {} does not match the {} scalar field",
            spec.kind,
            if T::IS_COMPLEX { "complex" } else { "real" }
        )));
    }
    let mut rng = replicate_rng(spec.seed, replicate, stream::NOISE);
    let mut z = Mat::<T>::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            z[(i, j)] = T::gaussian(&mut rng);
        }
        if spec.kind.is_spherical() {
            let norm2: f64 = (0..m).map(|i| z[(i, j)].abs2()).sum();
            let factor = (m as f64 / norm2).sqrt();
            for i in 0..m {
                z[(i, j)] = z[(i, j)].scale(factor);
            }
        }
    }
    Ok(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    /// Rescale so that `tr C_N = N`.
    TraceN,
}

/// Diagonal column covariance `σ² diag(α_1, …, α_p, 1, …, 1)`, optionally
/// divided by `ζ_N = N⁻¹(Σα_i + N − p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnCovariance {
    alphas: Vec<f64>,
    sigma2: f64,
    normalize: Normalization,
    n: usize,
}

impl ColumnCovariance {
    /// Spikes are sorted in descending order.
    pub fn new(
        mut alphas: Vec<f64>,
        sigma2: f64,
        normalize: Normalization,
        n: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        if alphas.len() > n {
            return Err(Error::InvalidParameter(format!(
                "{} spikes exceed dimension N = {n}",
                alphas.len()
            )));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        if let Some(bad) = alphas.iter().find(|&&a| !(a > 1.0 && a.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "spike strengths must exceed 1, got {bad}"
            )));
        }
        alphas.sort_by(|x, y| y.total_cmp(x));
        Ok(Self {
            alphas,
            sigma2,
            normalize,
            n,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            alphas: Vec::new(),
            sigma2: 1.0,
            normalize: Normalization::None,
            n,
        }
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn p(&self) -> usize {
        self.alphas.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn normalization(&self) -> Normalization {
        self.normalize
    }

    /// `ζ_N = N⁻¹(Σα_i + N − p)`, or 1 without normalization.
    pub fn zeta(&self) -> f64 {
        match self.normalize {
            Normalization::None => 1.0,
            Normalization::TraceN => {
                (self.alphas.iter().sum::<f64>() + (self.n - self.p()) as f64) / self.n as f64
            }
        }
    }

    /// Noise level after normalization (the `σ²` multiplying the unit bulk).
    pub fn sigma2(&self) -> f64 {
        match self.normalize {
            Normalization::None => self.sigma2,
            Normalization::TraceN => 1.0 / self.zeta(),
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        let s2 = self.sigma2();
        (0..self.n)
            .map(|i| s2 * self.alphas.get(i).copied().unwrap_or(1.0))
            .collect()
    }

    /// `ξ_N = N⁻¹ tr C_N`.
    pub fn xi(&self) -> f64 {
        match self.normalize {
            Normalization::TraceN => 1.0,
            Normalization::None => self.diag().iter().sum::<f64>() / self.n as f64,
        }
    }
}

/// Where a data matrix came from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataMeta {
    pub model: Option<SpectralModel>,
    pub noise: Option<NoiseSpec>,
    pub column_cov: Option<ColumnCovariance>,
    pub replicate: u64,
}

/// An `M×N` data matrix (rows are time, columns are series).
#[derive(Debug, Clone)]
pub struct DataMatrix<T: Scalar> {
    pub entries: Mat<T>,
    pub meta: DataMeta,
}

impl<T: Scalar> DataMatrix<T> {
    pub fn new(entries: Mat<T>, meta: DataMeta) -> Self {
        Self { entries, meta }
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n(&self) -> usize {
        self.entries.ncols()
    }

    pub fn scaled(&self, by: f64) -> Self {
        Self {
            entries: Mat::from_fn(self.m(), self.n(), |i, j| self.entries[(i, j)].scale(by)),
            meta: self.meta.clone(),
        }
    }
}

/// `X = R^{1/2} Z diag(√c_n)`.
pub fn assemble_x<T: Scalar>(
    rsqrt: &HermitianMatrix<T>,
    z: MatRef<'_, T>,
    c: &ColumnCovariance,
) -> Result<DataMatrix<T>> {
    if rsqrt.dim() != z.nrows() || c.n() != z.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "R^1/2 is {0}x{0}, Z is {1}x{2}, C has dimension {3}",
            rsqrt.dim(),
            z.nrows(),
            z.ncols(),
            c.n()
        )));
    }
    let mut x = mat_mul(rsqrt.entries(), z);
    scale_columns(&mut x, &c.diag());
    Ok(DataMatrix::new(
        x,
        DataMeta {
            column_cov: Some(c.clone()),
            ..DataMeta::default()
        },
    ))
}

/// Draws `(Z, X)` pairs for a fixed row model, sharing one `R^{1/2}`.
#[derive(Debug, Clone)]
pub struct Simulator<T: Scalar> {
    model: SpectralModel,
    r: ToeplitzHerm<f64>,
    rsqrt: HermitianMatrix<T>,
    n: usize,
    noise: NoiseSpec,
}

impl<T: Scalar> Simulator<T> {
    pub fn new(model: SpectralModel, m: usize, n: usize, noise: NoiseSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        if noise.kind.is_complex() != T::IS_COMPLEX {
            return Err(Error::InvalidParameter(format!(
                "noise kind {} does not match the {} scalar field",
                noise.kind,
                if T::IS_COMPLEX { "complex" } else { "real" }
            )));
        }
        let r = build_toeplitz(&model, m)?;
        let rsqrt = r.to_field::<T>().to_dense().sqrt()?;
        Ok(Self {
            model,
            r,
            rsqrt,
            n,
            noise,
        })
    }

    pub fn m(&self) -> usize {
        self.r.dim()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &SpectralModel {
        &self.model
    }

    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    pub fn toeplitz(&self) -> &ToeplitzHerm<f64> {
        &self.r
    }

    pub fn rsqrt(&self) -> &HermitianMatrix<T> {
        &self.rsqrt
    }

    /// The noise `Z` and the data `X = R^{1/2} Z C^{1/2}` of one replicate.
    pub fn draw(&self, c: &ColumnCovariance, replicate: u64) -> Result<(Mat<T>, DataMatrix<T>)> {
        let z = sample_noise::<T>(&self.noise, self.m(), self.n, replicate)?;
        let mut x = assemble_x(&self.rsqrt, z.as_ref(), c)?;
        x.meta = DataMeta {
            model: Some(self.model),
            noise: Some(self.noise),
            column_cov: Some(c.clone()),
            replicate,
        };
        Ok((z, x))
    }
}

/// Multiplies column `j` by `√c_j`.
pub fn scale_columns<T: Scalar>(x: &mut Mat<T>, c: &[f64]) {
    for (j, &cj) in c.iter().enumerate() {
        let s = cj.sqrt();
        for i in 0..x.nrows() {
            x[(i, j)] = x[(i, j)].scale(s);
        }
    }
}

/// `Y = A·W + σ·E` with `W` (`p×M`) and `E` (`N×M`) standard complex
/// Gaussian, so the columns of `Y` have covariance `AAᴴ + σ²I`.
///
/// The returned covariance holds the spectrum of `AAᴴ + σ²I` as
/// `σ²(α_1, …, α_r, 1, …)`; null directions of `A` carry no spike.
pub fn signal_plus_noise(
    a: MatRef<'_, c64>,
    sigma: f64,
    m: usize,
    seed: u64,
    replicate: u64,
) -> Result<(Mat<c64>, ColumnCovariance)> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if m == 0 || a.nrows() == 0 {
        return Err(Error::InvalidParameter(
            "signal dimensions must be positive".into(),
        ));
    }
    let (n, p) = (a.nrows(), a.ncols());
    let sigma2 = sigma * sigma;

    let mut rng = replicate_rng(seed, replicate, stream::SIGNAL);
    let w = Mat::<c64>::from_fn(p, m, |_, _| c64::gaussian(&mut rng));
    let mut rng = replicate_rng(seed, replicate, stream::SIGNAL_NOISE);
    let mut y = Mat::<c64>::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            y[(i, j)] = c64::gaussian(&mut rng) * sigma;
        }
    }
    if p > 0 {
        y += mat_mul(a, w.as_ref());
    }

    let alphas = if p == 0 {
        Vec::new()
    } else {
        let gram = HermitianMatrix::from_lower(mat_adj_mul(a, a));
        let scale = gram.lambda_max()?.max(f64::MIN_POSITIVE);
        gram.eigenvalues()?
            .iter()
            .filter(|&&s| s > 1e-12 * scale)
            .map(|&s| 1.0 + s / sigma2)
            .collect()
    };
    let cov = ColumnCovariance::new(alphas, sigma2, Normalization::None, n)?;
    Ok((y, cov))
}

/// Random spike configuration: `p ~ Poisson(mean)` and `α_i ~ U[lo, hi]`
/// i.i.d., drawn from the replicate's spike sub-streams.
pub fn draw_spikes(seed: u64, replicate: u64, mean: f64, lo: f64, hi: f64) -> Result<Vec<f64>> {
    use rand::Rng;
    use rand_distr::{Distribution, Poisson, Uniform};

    let poisson = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?;
    let uniform = Uniform::new_inclusive(lo, hi)
        .map_err(|e| Error::InvalidParameter(format!("spike range [{lo}, {hi}]: {e}")))?;
    let p = poisson.sample(&mut replicate_rng(seed, replicate, stream::SPIKE_COUNT)) as usize;
    let mut rng = replicate_rng(seed, replicate, stream::SPIKE_VALUES);
    let mut alphas: Vec<f64> = (0..p).map(|_| rng.sample(uniform)).collect();
    alphas.sort_by(|x, y| y.total_cmp(x));
    Ok(alphas)
}

/// `N×p` loading matrix `U·diag(s)` whose columns are orthogonal with the
/// given norms; `U` orthonormalizes `p` real Gaussian vectors.
pub fn loadings_with_singular_values(
    n: usize,
    singular_values: &[f64],
    seed: u64,
) -> Result<Mat<c64>> {
    let p = singular_values.len();
    if p > n {
        return Err(Error::InvalidParameter(format!(
            "{p} loadings exceed dimension N = {n}"
        )));
    }
    let mut rng = replicate_rng(seed, 0, stream::LOADINGS);
    let mut u = Mat::<f64>::from_fn(n, p, |_, _| f64::gaussian(&mut rng));
    // modified Gram–Schmidt
    for k in 0..p {
        for prev in 0..k {
            let dot: f64 = (0..n).map(|i| u[(i, k)] * u[(i, prev)]).sum();
            for i in 0..n {
                u[(i, k)] -= dot * u[(i, prev)];
            }
        }
        let norm = (0..n).map(|i| u[(i, k)].powi(2)).sum::<f64>().sqrt();
        for i in 0..n {
            u[(i, k)] /= norm;
        }
    }
    Ok(Mat::from_fn(n, p, |i, k| {
        c64::new(u[(i, k)] * singular_values[k], 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| replicate_rng(5, 2, 0).random()).collect();
        let mut r = replicate_rng(5, 2, 0);
        let b: Vec<u64> = (0..4).map(|_| r.random()).collect();
        assert_eq!(a[0], b[0]);
        let mut other = replicate_rng(5, 3, 0);
        let mut tagged = replicate_rng(5, 2, 1);
        assert_ne!(other.random::<u64>(), b[0]);
        assert_ne!(tagged.random::<u64>(), b[0]);
    }

    #[test]
    fn spherical_columns_have_norm_sqrt_m() {
        let z: Mat<c64> =
            sample_noise(&NoiseSpec::new(NoiseKind::SphericalComplex, 1), 8, 3, 0).unwrap();
        for j in 0..3 {
            let norm2: f64 = (0..8).map(|i| z[(i, j)].norm_sqr()).sum();
            assert!((norm2 - 8.0).abs() < 1e-12 * 8.0);
        }
        let z: Mat<f64> =
            sample_noise(&NoiseSpec::new(NoiseKind::SphericalReal, 1), 5, 4, 7).unwrap();
        for j in 0..4 {
            let norm2: f64 = (0..5).map(|i| z[(i, j)].powi(2)).sum();
            assert!((norm2 - 5.0).abs() < 1e-12 * 5.0);
        }
    }

    #[test]
    fn gaussian_complex_moments() {
        let z: Mat<c64> =
            sample_noise(&NoiseSpec::new(NoiseKind::GaussianComplex, 42), 100, 100, 0).unwrap();
        let count = 10_000.0;
        let mut mean = c64::new(0.0, 0.0);
        let (mut power, mut re2) = (0.0, 0.0);
        for j in 0..100 {
            for i in 0..100 {
                mean += z[(i, j)];
                power += z[(i, j)].norm_sqr();
                re2 += z[(i, j)].re * z[(i, j)].re;
            }
        }
        assert!((mean / count).norm() < 0.05);
        assert!((power / count - 1.0).abs() < 0.05);
        assert!((re2 / count - 0.5).abs() < 0.05);
    }

    #[test]
    fn noise_is_deterministic() {
        let spec = NoiseSpec::new(NoiseKind::GaussianReal, 9);
        let a: Mat<f64> = sample_noise(&spec, 6, 5, 3).unwrap();
        let b: Mat<f64> = sample_noise(&spec, 6, 5, 3).unwrap();
        assert_eq!(a, b);
        let c: Mat<f64> = sample_noise(&spec, 6, 5, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_field_mismatch_rejected() {
        let spec = NoiseSpec::new(NoiseKind::GaussianComplex, 0);
        assert!(sample_noise::<f64>(&spec, 2, 2, 0).is_err());
        assert!(sample_noise::<c64>(&spec, 0, 2, 0).is_err());
    }

    #[test]
    fn noise_kind_round_trip() {
        for kind in [
            NoiseKind::GaussianReal,
            NoiseKind::GaussianComplex,
            NoiseKind::SphericalReal,
            NoiseKind::SphericalComplex,
        ] {
            assert_eq!(kind.name().parse::<NoiseKind>().unwrap(), kind);
        }
        assert!("laplace".parse::<NoiseKind>().is_err());
    }

    #[test]
    fn xi_examples() {
        assert_eq!(ColumnCovariance::identity(7).xi(), 1.0);
        let c = ColumnCovariance::new(vec![10.0], 1.0, Normalization::None, 10).unwrap();
        assert!((c.xi() - 1.9).abs() < 1e-15);
        let c =
            ColumnCovariance::new(vec![4.0, 10.0, 6.0], 2.5, Normalization::TraceN, 20).unwrap();
        assert_eq!(c.xi(), 1.0);
        assert!((c.diag().iter().sum::<f64>() - 20.0).abs() < 1e-12);
        assert_eq!(c.alphas(), &[10.0, 6.0, 4.0]);
    }

    #[test]
    fn table_one_noise_level() {
        let c = ColumnCovariance::new(
            vec![10.0, 10.0, 6.0, 4.0, 4.0, 4.0],
            1.0,
            Normalization::TraceN,
            500,
        )
        .unwrap();
        assert!((c.sigma2() - 500.0 / 532.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_validation() {
        assert!(ColumnCovariance::new(vec![0.5], 1.0, Normalization::None, 4).is_err());
        assert!(ColumnCovariance::new(vec![2.0; 5], 1.0, Normalization::None, 4).is_err());
        assert!(ColumnCovariance::new(vec![], 0.0, Normalization::None, 4).is_err());
    }

    #[test]
    fn assemble_identity_returns_noise() {
        let z: Mat<c64> =
            sample_noise(&NoiseSpec::new(NoiseKind::GaussianComplex, 3), 4, 6, 0).unwrap();
        let x = assemble_x(
            &HermitianMatrix::identity(4),
            z.as_ref(),
            &ColumnCovariance::identity(6),
        )
        .unwrap();
        assert_eq!(x.entries, z);
        assert!(assemble_x(
            &HermitianMatrix::identity(3),
            z.as_ref(),
            &ColumnCovariance::identity(6)
        )
        .is_err());
    }

    #[test]
    fn assemble_two_by_two_by_hand() {
        // R^{1/2} = [[2, 1], [1, 3]], Z = [[1, 0], [2, -1]], C = diag(4, 9)
        let rsqrt = HermitianMatrix::new(Mat::from_fn(2, 2, |i, j| [[2.0, 1.0], [1.0, 3.0]][i][j]))
            .unwrap();
        let z = Mat::from_fn(2, 2, |i, j| [[1.0, 0.0], [2.0, -1.0]][i][j]);
        let c = ColumnCovariance::new(vec![9.0 / 4.0], 4.0, Normalization::None, 2).unwrap();
        // C = 4·diag(9/4, 1) = diag(9, 4)
        let x = assemble_x(&rsqrt, z.as_ref(), &c).unwrap();
        // R^{1/2} Z = [[4, -1], [7, -3]]; columns scaled by 3 and 2
        let expect = [[12.0, -2.0], [21.0, -6.0]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((x.entries[(i, j)] - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn signal_plus_noise_spike_strength() {
        let a = Mat::from_fn(4, 1, |i, _| c64::new([2.0, 1.0, 2.0, 0.0][i], 0.0));
        let (y, cov) = signal_plus_noise(a.as_ref(), 1.0, 10, 0, 0).unwrap();
        assert_eq!((y.nrows(), y.ncols()), (4, 10));
        assert_eq!(cov.alphas().len(), 1);
        assert!((cov.alphas()[0] - 10.0).abs() < 1e-12);
        let zero = Mat::<c64>::zeros(3, 2);
        let (_, cov) = signal_plus_noise(zero.as_ref(), 1.0, 5, 0, 0).unwrap();
        assert_eq!(cov.p(), 0);
    }

    #[test]
    fn spike_draws_reproducible_and_in_range() {
        let a = draw_spikes(4, 17, 4.0, 3.0, 10.0).unwrap();
        assert_eq!(a, draw_spikes(4, 17, 4.0, 3.0, 10.0).unwrap());
        assert!(a.iter().all(|&x| (3.0..=10.0).contains(&x)));
        assert!(a.windows(2).all(|w| w[0] >= w[1]));
        let total: usize = (0..2000)
            .map(|r| draw_spikes(1, r, 4.0, 3.0, 10.0).unwrap().len())
            .sum();
        assert!((total as f64 / 2000.0 - 4.0).abs() < 5.0 * (4.0f64 / 2000.0).sqrt());
    }

    #[test]
    fn loadings_have_requested_singular_values() {
        let a = loadings_with_singular_values(50, &[5.39, 19.97, 47.25], 2).unwrap();
        let gram = HermitianMatrix::from_lower(mat_adj_mul(a.as_ref(), a.as_ref()));
        let eig = gram.eigenvalues().unwrap();
        for (l, s) in eig.iter().zip([5.39f64, 19.97, 47.25]) {
            assert!((l.sqrt() - s).abs() < 1e-10 * s);
        }
    }
}
