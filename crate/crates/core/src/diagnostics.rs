//! Consistency diagnostics for toeplitzified estimators: ratio and
//! spectral-norm deviations, ratio ESDs, and the `Q_M(θ)` trace oracles.

use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::scalar::{c64, pairwise_sum, Scalar};
use crate::spectral::{
    build_toeplitz, CirculantEmbedding, SpectralDensity, SpectralModel, ToeplitzHerm,
};

/// `‖R^{-1/2} R̂ R^{-1/2} − ξI‖`, the largest of `|λ_max − ξ|`, `|λ_min − ξ|`.
pub fn ratio_deviation<T: Scalar>(
    rhat: &HermitianMatrix<T>,
    r: &HermitianMatrix<T>,
    xi: f64,
) -> Result<f64> {
    let eig = ratio_esd(rhat, r)?;
    let (lo, hi) = (eig[0], eig[eig.len() - 1]);
    Ok((hi - xi).abs().max((lo - xi).abs()))
}

/// `‖R̂ − ξR‖`.
pub fn norm_deviation<T: Scalar>(
    rhat: &HermitianMatrix<T>,
    r: &HermitianMatrix<T>,
    xi: f64,
) -> Result<f64> {
    rhat.add_scaled(r, -xi)?.spectral_norm()
}

/// Ascending eigenvalues of `R^{-1/2} R̂ R^{-1/2}` (the spectrum of `R⁻¹R̂`).
pub fn ratio_esd<T: Scalar>(rhat: &HermitianMatrix<T>, r: &HermitianMatrix<T>) -> Result<Vec<f64>> {
    if rhat.dim() != r.dim() || r.dim() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "estimate is {}x{}, truth is {}x{}",
            rhat.dim(),
            rhat.dim(),
            r.dim(),
            r.dim()
        )));
    }
    let w = r.inv_sqrt()?;
    Ok(rhat.sandwich(&w)?.eigenvalues()?.to_vec())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub m: usize,
    pub n: usize,
    pub a: f64,
    pub biased: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub ratio_dev: f64,
    pub norm_dev: f64,
    pub esd_ratio: Vec<f64>,
    pub meta: ReportMeta,
}

pub fn consistency_report<T: Scalar>(
    rhat: &HermitianMatrix<T>,
    r: &HermitianMatrix<T>,
    xi: f64,
    meta: ReportMeta,
) -> Result<ConsistencyReport> {
    let esd_ratio = ratio_esd(rhat, r)?;
    let (lo, hi) = (esd_ratio[0], esd_ratio[esd_ratio.len() - 1]);
    Ok(ConsistencyReport {
        ratio_dev: (hi - xi).abs().max((lo - xi).abs()),
        norm_dev: norm_deviation(rhat, r, xi)?,
        esd_ratio,
        meta,
    })
}

/// Lags of `D_M(θ) B_M D_M(θ)ᴴ`: `e^{ikθ} / (M − k)`.
fn modulated_b_lags(m: usize, theta: f64) -> Vec<c64> {
    (0..m)
        .map(|k| {
            let w = 1.0 / (m - k) as f64;
            c64::new(w * (k as f64 * theta).cos(), w * (k as f64 * theta).sin())
        })
        .collect()
}

/// Builds `Q_M(θ) = R^{1/2} D B Dᴴ R^{1/2}` with `D = diag(e^{ikθ})` and
/// `B_{ij} = 1/(M − |i−j|)`, reusing one square root of `R` across angles.
pub struct QBuilder {
    rsqrt: HermitianMatrix<c64>,
}

impl QBuilder {
    pub fn new<T: Scalar>(r: &ToeplitzHerm<T>) -> Result<Self> {
        let rsqrt = r.to_field::<c64>().to_dense().sqrt()?;
        Ok(Self { rsqrt })
    }

    pub fn q(&self, theta: f64) -> Result<HermitianMatrix<c64>> {
        let m = self.rsqrt.dim();
        let a = ToeplitzHerm::new(modulated_b_lags(m, theta))?.to_dense();
        a.sandwich(&self.rsqrt)
    }
}

pub fn build_q<T: Scalar>(r: &ToeplitzHerm<T>, theta: f64) -> Result<HermitianMatrix<c64>> {
    QBuilder::new(r)?.q(theta)
}

/// `tr Q_M(θ)²`, evaluated as `tr (R·D B Dᴴ)²` (equal by cyclicity) with the
/// product formed column by column through the circulant embedding of `R`.
pub fn trace_q2<T: Scalar>(r: &ToeplitzHerm<T>, theta: f64) -> Result<f64> {
    trace_q2_with(&CirculantEmbedding::new(r), theta)
}

fn trace_q2_with(r: &CirculantEmbedding, theta: f64) -> Result<f64> {
    let m = r.dim();
    let a = ToeplitzHerm::new(modulated_b_lags(m, theta))?;
    let mut p = Mat::<c64>::zeros(m, m);
    let mut column = vec![c64::new(0.0, 0.0); m];
    for j in 0..m {
        for (i, v) in column.iter_mut().enumerate() {
            *v = a.lag(i as isize - j as isize);
        }
        let rc = r.apply(&column)?;
        for (i, v) in rc.into_iter().enumerate() {
            p[(i, j)] = v;
        }
    }
    let terms: Vec<f64> = (0..m)
        .flat_map(|j| {
            let p = &p;
            (0..m).map(move |k| (p[(j, k)] * p[(k, j)]).re)
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `tr Q²(θ) / (f(θ)² log² M)` on a grid of angles.
#[derive(Debug, Clone, PartialEq)]
pub struct Trq2Profile {
    /// `(θ, normalized trace)` for every angle where `f(θ)` is positive and finite.
    pub values: Vec<(f64, f64)>,
    /// Angles dropped because `f(θ)` vanished or was not finite.
    pub skipped: Vec<f64>,
}

impl Trq2Profile {
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn trq2_profile<T: Scalar, D: SpectralDensity + ?Sized>(
    r: &ToeplitzHerm<T>,
    f: &D,
    thetas: &[f64],
) -> Result<Trq2Profile> {
    let m = r.dim();
    if m < 2 {
        return Err(Error::InvalidParameter("tr Q² profile needs M >= 2".into()));
    }
    let op = CirculantEmbedding::new(r);
    let log2m = (m as f64).ln().powi(2);
    let mut values = Vec::with_capacity(thetas.len());
    let mut skipped = Vec::new();
    for &theta in thetas {
        let ft = f.eval(theta);
        if ft > 0.0 && ft.is_finite() {
            values.push((theta, trace_q2_with(&op, theta)? / (ft * ft * log2m)));
        } else {
            skipped.push(theta);
        }
    }
    Ok(Trq2Profile { values, skipped })
}

/// `tr (B_M R_M)²`, the `N`-free factor of `var Υ̂_M(0)`.
pub fn var_upsilon0_oracle<T: Scalar>(r: &ToeplitzHerm<T>) -> Result<f64> {
    if r.dim() < 2 {
        return Err(Error::InvalidParameter(
            "variance oracle needs M >= 2".into(),
        ));
    }
    trace_q2(r, 0.0)
}

/// `λ_max(Rᵇ_M) / λ_max(R_M)` with `Rᵇ_M = ((1 − |i−j|/M) r_{i−j})`.
pub fn lmax_ratio_biased(model: &SpectralModel, m: usize) -> Result<f64> {
    let r = build_toeplitz(model, m)?;
    let tapered: Vec<f64> = r
        .lags()
        .iter()
        .enumerate()
        .map(|(k, &v)| (1.0 - k as f64 / m as f64) * v)
        .collect();
    let rb = ToeplitzHerm::new(tapered)?;
    Ok(rb.to_dense().lambda_max()? / r.to_dense().lambda_max()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::replicate_rng;

    fn random_pd(m: usize, seed: u64) -> HermitianMatrix<c64> {
        let mut rng = replicate_rng(seed, 0, 0);
        let g = Mat::from_fn(m, m, |_, _| c64::gaussian(&mut rng));
        let mut gram = crate::linalg::mat_mul_adj(g.as_ref(), g.as_ref());
        for i in 0..m {
            gram[(i, i)] += c64::new(0.5, 0.0);
        }
        HermitianMatrix::from_lower(gram)
    }

    #[test]
    fn ratio_deviation_examples() {
        let r = random_pd(6, 1);
        assert!(ratio_deviation(&r.scaled(1.7), &r, 1.7).unwrap() < 1e-10);
        assert!((ratio_deviation(&r.scaled(2.0), &r, 1.0).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ratio_deviation_matches_explicit_ratio() {
        let r = random_pd(8, 2);
        let rhat = random_pd(8, 3);
        // Oracle: R^{-1/2} from a fresh decomposition, ratio matrix formed densely.
        let w = HermitianMatrix::from_lower(r.entries().to_owned())
            .inv_sqrt()
            .unwrap();
        let prod = crate::linalg::mat_mul(
            w.entries(),
            crate::linalg::mat_mul(rhat.entries(), w.entries()).as_ref(),
        );
        let eig = HermitianMatrix::from_lower(prod)
            .eigenvalues()
            .unwrap()
            .to_vec();
        let oracle = (eig[7] - 0.9).abs().max((eig[0] - 0.9).abs());
        assert!((ratio_deviation(&rhat, &r, 0.9).unwrap() - oracle).abs() < 1e-8 * oracle);
    }

    #[test]
    fn norm_deviation_examples() {
        let r = random_pd(5, 4);
        assert!(norm_deviation(&r.scaled(3.0), &r, 3.0).unwrap() < 1e-12);
        let mut bumped = r.scaled(2.0).entries().to_owned();
        bumped[(0, 0)] += c64::new(1.0, 0.0);
        let bumped = HermitianMatrix::from_lower(bumped);
        assert!((norm_deviation(&bumped, &r, 2.0).unwrap() - 1.0).abs() < 1e-10);
        let diff = bumped.add_scaled(&random_pd(5, 9), -1.0).unwrap();
        let power = diff.spectral_norm_power(10_000, 1e-14);
        assert!((diff.spectral_norm().unwrap() - power).abs() < 1e-6 * power);
    }

    #[test]
    fn ratio_esd_examples() {
        let r = random_pd(5, 5);
        assert!(ratio_esd(&r, &r)
            .unwrap()
            .iter()
            .all(|&l| (l - 1.0).abs() < 1e-10));
        assert!(ratio_esd(&r.scaled(2.0), &r)
            .unwrap()
            .iter()
            .all(|&l| (l - 2.0).abs() < 1e-10));
        let singular = HermitianMatrix::<c64>::zeros(5);
        assert!(matches!(
            ratio_esd(&r, &singular),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn q_for_identity_is_b() {
        let eye = ToeplitzHerm::new(vec![1.0, 0.0]).unwrap();
        let q = build_q(&eye, 0.0).unwrap();
        let expect = [[0.5, 1.0], [1.0, 0.5]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((q.get(i, j) - c64::new(e, 0.0)).norm() < 1e-14);
            }
        }
        let eye3 = ToeplitzHerm::new(vec![1.0, 0.0, 0.0]).unwrap();
        let q = build_q(&eye3, 1.3).unwrap();
        assert!((q.trace() - 1.0).abs() < 1e-14);
        assert!((q.frobenius_norm().powi(2) - 10.0 / 3.0).abs() < 1e-13);
        assert!((trace_q2(&eye3, 1.3).unwrap() - 10.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn fft_trace_matches_frobenius_of_q() {
        let model = SpectralModel::time_domain(0.7).unwrap();
        let r = build_toeplitz(&model, 24).unwrap();
        let builder = QBuilder::new(&r).unwrap();
        for theta in [0.0, 0.2, 1.7, std::f64::consts::PI] {
            let direct = builder.q(theta).unwrap().frobenius_norm().powi(2);
            let fast = trace_q2(&r, theta).unwrap();
            assert!((direct - fast).abs() < 1e-10 * direct, "θ={theta}");
        }
    }

    #[test]
    fn trq2_profile_identity() {
        let eye = ToeplitzHerm::new(vec![1.0, 0.0, 0.0]).unwrap();
        let one = |_: f64| 1.0;
        let zero_at_one = |t: f64| if t == 1.0 { 0.0 } else { 1.0 };
        let p = trq2_profile(&eye, &one, &[0.3, 2.0]).unwrap();
        let expect = (10.0 / 3.0) / 3f64.ln().powi(2);
        assert!((expect - 2.7617).abs() < 1e-4);
        assert!(p.values.iter().all(|v| (v.1 - expect).abs() < 1e-12));
        let p = trq2_profile(&eye, &zero_at_one, &[1.0, 2.0]).unwrap();
        assert_eq!(p.skipped, vec![1.0]);
        assert_eq!(p.values.len(), 1);
    }

    #[test]
    fn var_oracle_identity() {
        let eye = ToeplitzHerm::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!((var_upsilon0_oracle(&eye).unwrap() - 10.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn lmax_ratio_trivial() {
        let model = SpectralModel::time_domain(0.9).unwrap();
        assert_eq!(lmax_ratio_biased(&model, 1).unwrap(), 1.0);
        let r = lmax_ratio_biased(&model, 64).unwrap();
        assert!(r < 1.0 + 1e-10 && r > 0.5);
    }
}
