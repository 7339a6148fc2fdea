//! Real and complex scalar fields used throughout the crate.
//!
//! Every matrix routine is generic over [`Scalar`], implemented for `f64`
//! (real-valued series) and [`c64`] (complex-valued series).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;

pub use faer::c64;

/// A field element: either `f64` or `c64`.
pub trait Scalar:
    faer::traits::ComplexField<Real = f64>
    + Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    const IS_COMPLEX: bool;

    fn zero() -> Self;
    fn one() -> Self {
        Self::from_re(1.0)
    }
    fn from_re(re: f64) -> Self;
    /// Builds `re + i·im`; the real field drops `im`.
    fn from_parts(re: f64, im: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn conj(self) -> Self;
    fn abs2(self) -> f64;
    fn modulus(self) -> f64 {
        self.abs2().sqrt()
    }
    fn scale(self, by: f64) -> Self;
    fn to_c64(self) -> c64 {
        c64::new(self.re(), self.im())
    }
    /// Standard Gaussian with `E|z|² = 1`; complex draws split the
    /// variance evenly between real and imaginary parts.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn from_re(re: f64) -> Self {
        re
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn conj(self) -> Self {
        self
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn scale(self, by: f64) -> Self {
        self * by
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for c64 {
    const IS_COMPLEX: bool = true;

    fn zero() -> Self {
        c64::new(0.0, 0.0)
    }
    fn from_re(re: f64) -> Self {
        c64::new(re, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        c64::new(re, im)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn conj(self) -> Self {
        c64::new(self.re, -self.im)
    }
    fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    fn scale(self, by: f64) -> Self {
        c64::new(self.re * by, self.im * by)
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    }
}

/// Pairwise (cascade) summation; error grows like `O(log n)` instead of `O(n)`.
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut acc = T::zero();
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
