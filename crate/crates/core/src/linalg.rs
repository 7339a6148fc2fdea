//! Dense Hermitian matrices with a cached eigendecomposition.

use std::sync::OnceLock;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par, Side};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Negative eigenvalues down to `-PSD_CLAMP * λ_max` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Inverses require `λ_min > PD_TOLERANCE * λ_max`.
pub const PD_TOLERANCE: f64 = 1e-12;
/// Relative Frobenius asymmetry accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// `A·B` computed single-threaded, so results do not depend on the thread pool.
pub fn mat_mul<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Mat<T> {
    let mut out = Mat::<T>::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, T::one(), Par::Seq);
    out
}

/// `Aᴴ·B`.
pub fn mat_adj_mul<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Mat<T> {
    let mut out = Mat::<T>::zeros(a.ncols(), b.ncols());
    matmul(
        out.as_mut(),
        Accum::Replace,
        a.adjoint(),
        b,
        T::one(),
        Par::Seq,
    );
    out
}

/// `A·Bᴴ`.
pub fn mat_mul_adj<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Mat<T> {
    let mut out = Mat::<T>::zeros(a.nrows(), b.nrows());
    matmul(
        out.as_mut(),
        Accum::Replace,
        a,
        b.adjoint(),
        T::one(),
        Par::Seq,
    );
    out
}

pub fn frobenius<T: Scalar>(a: MatRef<'_, T>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)].abs2();
        }
    }
    acc.sqrt()
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen<T: Scalar> {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored column-wise, in the order of `values`.
    pub vectors: Mat<T>,
}

/// Dense Hermitian (or real symmetric) matrix.
///
/// The entries are stored exactly Hermitian: constructors mirror the lower
/// triangle into the upper one. The eigendecomposition is computed at most
/// once and shared by every spectral query.
#[derive(Debug, Clone)]
pub struct HermitianMatrix<T: Scalar> {
    entries: Mat<T>,
    eigen: OnceLock<std::result::Result<Eigen<T>, Error>>,
    values: OnceLock<std::result::Result<Vec<f64>, Error>>,
}

impl<T: Scalar> HermitianMatrix<T> {
    /// Validates that `entries` is square and Hermitian to [`HERMITIAN_TOLERANCE`].
    pub fn new(entries: Mat<T>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        let mut diff = 0.0;
        for j in 0..n {
            for i in 0..n {
                diff += (entries[(i, j)] - entries[(j, i)].conj()).abs2();
            }
        }
        let scale = frobenius(entries.as_ref());
        let asymmetry = if scale > 0.0 {
            diff.sqrt() / scale
        } else {
            0.0
        };
        if asymmetry > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::from_lower(entries))
    }

    /// Trusts the lower triangle and mirrors it; the diagonal is made real.
    pub fn from_lower(mut entries: Mat<T>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "matrix must be square");
        let n = entries.nrows();
        for j in 0..n {
            entries[(j, j)] = T::from_re(entries[(j, j)].re());
            for i in (j + 1)..n {
                entries[(j, i)] = entries[(i, j)].conj();
            }
        }
        Self::wrap(entries)
    }

    fn wrap(entries: Mat<T>) -> Self {
        Self {
            entries,
            eigen: OnceLock::new(),
            values: OnceLock::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::wrap(Mat::zeros(n, n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::wrap(Mat::from_fn(n, n, |i, j| {
            if i == j {
                T::from_re(diag[i])
            } else {
                T::zero()
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> MatRef<'_, T> {
        self.entries.as_ref()
    }

    pub fn into_entries(self) -> Mat<T> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(self.entries.as_ref())
    }

    /// Full eigendecomposition, computed on first use.
    pub fn eigen(&self) -> Result<&Eigen<T>> {
        self.eigen
            .get_or_init(|| compute_eigen(self.entries.as_ref()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Ascending eigenvalues. Reuses a cached decomposition when present,
    /// otherwise runs the cheaper eigenvalues-only solver.
    pub fn eigenvalues(&self) -> Result<&[f64]> {
        if let Some(Ok(e)) = self.eigen.get() {
            return Ok(&e.values);
        }
        self.values
            .get_or_init(|| compute_eigenvalues(self.entries.as_ref()))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    pub fn lambda_min(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.first().unwrap_or(&0.0))
    }

    pub fn lambda_max(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().unwrap_or(&0.0))
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        Ok(self.lambda_min()?.abs().max(self.lambda_max()?.abs()))
    }

    /// `V·diag(g(λ))·Vᴴ`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        let e = self.eigen()?;
        let n = self.dim();
        let mut scaled = e.vectors.clone();
        for (j, &lambda) in e.values.iter().enumerate() {
            let w = g(lambda);
            for i in 0..n {
                scaled[(i, j)] = scaled[(i, j)].scale(w);
            }
        }
        Ok(Self::from_lower(mat_mul_adj(
            scaled.as_ref(),
            e.vectors.as_ref(),
        )))
    }

    /// Unique positive semi-definite square root.
    pub fn sqrt(&self) -> Result<Self> {
        self.check_psd()?;
        self.map_spectrum(|l| l.max(0.0).sqrt())
    }

    /// `A^{-1/2}`; requires `λ_min > PD_TOLERANCE·λ_max`.
    pub fn inv_sqrt(&self) -> Result<Self> {
        self.check_pd()?;
        self.map_spectrum(|l| 1.0 / l.sqrt())
    }

    pub fn inv(&self) -> Result<Self> {
        self.check_pd()?;
        self.map_spectrum(|l| 1.0 / l)
    }

    fn check_psd(&self) -> Result<()> {
        let values = self.eigenvalues()?;
        let (Some(&min), Some(&max)) = (values.first(), values.last()) else {
            return Ok(());
        };
        let tolerance = PSD_CLAMP * max.abs().max(min.abs());
        if min < -tolerance {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
                tolerance,
            });
        }
        Ok(())
    }

    pub(crate) fn check_pd(&self) -> Result<()> {
        let values = self.eigenvalues()?;
        let (Some(&min), Some(&max)) = (values.first(), values.last()) else {
            return Ok(());
        };
        let tolerance = PD_TOLERANCE * max;
        if min <= tolerance || max <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
                tolerance,
            });
        }
        Ok(())
    }

    /// `outer · self · outer` for Hermitian `outer`.
    pub fn sandwich(&self, outer: &HermitianMatrix<T>) -> Result<Self> {
        if outer.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "sandwich of {}x{} by {}x{}",
                self.dim(),
                self.dim(),
                outer.dim(),
                outer.dim()
            )));
        }
        let left = mat_mul(outer.entries(), self.entries());
        Ok(Self::from_lower(mat_mul(left.as_ref(), outer.entries())))
    }

    /// `self + scale·other`.
    pub fn add_scaled(&self, other: &HermitianMatrix<T>, scale: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "sum of {}x{} and {}x{}",
                self.dim(),
                self.dim(),
                other.dim(),
                other.dim()
            )));
        }
        let n = self.dim();
        Ok(Self::wrap(Mat::from_fn(n, n, |i, j| {
            self.entries[(i, j)] + other.entries[(i, j)].scale(scale)
        })))
    }

    pub fn scaled(&self, by: f64) -> Self {
        let n = self.dim();
        Self::wrap(Mat::from_fn(n, n, |i, j| self.entries[(i, j)].scale(by)))
    }

    pub fn mul_mat(&self, rhs: MatRef<'_, T>) -> Result<Mat<T>> {
        if rhs.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.dim(),
                self.dim(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(mat_mul(self.entries(), rhs))
    }

    /// Largest `|λ|` by power iteration; an independent cross-check of
    /// [`HermitianMatrix::spectral_norm`].
    pub fn spectral_norm_power(&self, max_iter: usize, tol: f64) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        // Iterate on A², whose dominant eigenvalue is λ_max(|A|)², so
        // eigenvalues ±λ of equal modulus do not stall convergence.
        let mut v = Mat::<T>::from_fn(n, 1, |i, _| {
            T::from_parts(1.0 + 0.5 * ((i * 7919) % 13) as f64 / 13.0, 0.0)
        });
        let mut estimate = 0.0_f64;
        for _ in 0..max_iter {
            let w = mat_mul(self.entries(), v.as_ref());
            let w = mat_mul(self.entries(), w.as_ref());
            let norm = frobenius(w.as_ref());
            if norm == 0.0 {
                return 0.0;
            }
            let next = norm / frobenius(v.as_ref());
            v = Mat::from_fn(n, 1, |i, _| w[(i, 0)].scale(1.0 / norm));
            if (next - estimate).abs() <= tol * next {
                estimate = next;
                break;
            }
            estimate = next;
        }
        estimate.sqrt()
    }
}

fn compute_eigen<T: Scalar>(a: MatRef<'_, T>) -> std::result::Result<Eigen<T>, Error> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: Mat::zeros(0, 0),
        });
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenFailed)?;
    let s = evd.S();
    let values = (0..n).map(|i| s[i].re()).collect();
    Ok(Eigen {
        values,
        vectors: evd.U().to_owned(),
    })
}

fn compute_eigenvalues<T: Scalar>(a: MatRef<'_, T>) -> std::result::Result<Vec<f64>, Error> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenFailed)
}
