//! Browser bindings for three interactive views: the spectrum of `R_M`
//! against its Szegő limit, the spectra of `R̂⁻¹R` for both Toeplitz
//! estimators, and the whitened sample covariance against Marchenko–Pastur.
//!
//! Each view has a plain Rust entry point (tested natively) and a thin
//! `wasm_bindgen` wrapper.

use lrdw_core::diagnostics::ratio_esd;
use lrdw_core::estimators::{sample_cov, toeplitzify};
use lrdw_core::spectral::{build_toeplitz, esd, ks_distance, szego_reference, SpectralModel};
use lrdw_core::synth::{ColumnCovariance, NoiseKind, NoiseSpec, Normalization, Simulator};
use lrdw_core::whiten::{mp_edges, spike_report, whitened_cov, Gammas, WhitenSource};
use lrdw_core::{c64, Error};
use wasm_bindgen::prelude::*;

/// Largest dimension accepted from the page; dense eigensolves beyond this
/// stall the tab.
pub const MAX_DIM: usize = 1024;

const SZEGO_GRID: usize = 4096;

fn check_dims(m: usize, n: usize) -> Result<(), Error> {
    if m < 2 || n < 1 || m > MAX_DIM || n > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimensions must satisfy 2 <= M <= {MAX_DIM}, 1 <= N <= {MAX_DIM}"
        )));
    }
    Ok(())
}

fn model(a: f64, frequency: bool) -> Result<SpectralModel, Error> {
    if frequency {
        SpectralModel::frequency_domain(a)
    } else {
        SpectralModel::time_domain(a)
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct ToeplitzView {
    eigenvalues: Vec<f64>,
    reference: Vec<f64>,
    ks: f64,
}

#[wasm_bindgen]
impl ToeplitzView {
    /// Ascending eigenvalues of `R_M`.
    #[wasm_bindgen(getter)]
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.clone()
    }

    /// Sorted density samples whose distribution is the Szegő limit.
    #[wasm_bindgen(getter)]
    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ks(&self) -> f64 {
        self.ks
    }
}

pub fn toeplitz_view(a: f64, m: usize, frequency: bool) -> Result<ToeplitzView, Error> {
    check_dims(m, 1)?;
    let model = model(a, frequency)?;
    let eigenvalues = esd(&build_toeplitz(&model, m)?.to_dense())?;
    let reference = szego_reference(&model, m, SZEGO_GRID.max(m))?;
    let ks = ks_distance(&eigenvalues, &reference);
    Ok(ToeplitzView {
        eigenvalues,
        reference,
        ks,
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct RatioView {
    biased: Vec<f64>,
    unbiased: Vec<f64>,
}

#[wasm_bindgen]
impl RatioView {
    /// Ascending spectrum of `R̂⁻¹R` for the biased estimate.
    #[wasm_bindgen(getter)]
    pub fn biased(&self) -> Vec<f64> {
        self.biased.clone()
    }

    /// Same for the unbiased estimate; empty if that estimate was not
    /// positive definite.
    #[wasm_bindgen(getter)]
    pub fn unbiased(&self) -> Vec<f64> {
        self.unbiased.clone()
    }
}

fn reciprocal_sorted(v: Vec<f64>) -> Vec<f64> {
    let mut out: Vec<f64> = v.into_iter().map(|x| 1.0 / x).collect();
    out.sort_by(f64::total_cmp);
    out
}

pub fn ratio_view(a: f64, m: usize, n: usize, seed: u64) -> Result<RatioView, Error> {
    check_dims(m, n)?;
    let sim = Simulator::<f64>::new(
        SpectralModel::time_domain(a)?,
        m,
        n,
        NoiseSpec::new(NoiseKind::GaussianReal, seed),
    )?;
    let (_, x) = sim.draw(&ColumnCovariance::identity(n), 0)?;
    let s = sample_cov(&x)?;
    let r = sim.toeplitz().to_dense();
    let spectrum = |biased: bool| ratio_esd(&toeplitzify(&s, biased).to_dense(), &r);
    let biased = reciprocal_sorted(spectrum(true)?);
    // the unbiased estimate can be indefinite; R̂⁻¹R is then meaningless
    let unbiased = match spectrum(false) {
        Ok(v) if v.iter().all(|&x| x > 0.0) => reciprocal_sorted(v),
        Ok(_) => Vec::new(),
        Err(e) if e.is_numerical() => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(RatioView { biased, unbiased })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct WhitenView {
    eigenvalues: Vec<f64>,
    lambda_minus: f64,
    lambda_plus: f64,
    p_hat: usize,
    sigma_hat: f64,
    alpha_hats: Vec<f64>,
}

#[wasm_bindgen]
impl WhitenView {
    /// Descending eigenvalues of the whitened sample covariance.
    #[wasm_bindgen(getter)]
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.clone()
    }

    #[wasm_bindgen(getter, js_name = lambdaMinus)]
    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    #[wasm_bindgen(getter, js_name = lambdaPlus)]
    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    #[wasm_bindgen(getter, js_name = pHat)]
    pub fn p_hat(&self) -> usize {
        self.p_hat
    }

    #[wasm_bindgen(getter, js_name = sigmaHat)]
    pub fn sigma_hat(&self) -> f64 {
        self.sigma_hat
    }

    #[wasm_bindgen(getter, js_name = alphaHats)]
    pub fn alpha_hats(&self) -> Vec<f64> {
        self.alpha_hats.clone()
    }
}

pub fn whiten_view(
    a: f64,
    m: usize,
    n: usize,
    spikes: &[f64],
    seed: u64,
) -> Result<WhitenView, Error> {
    check_dims(m, n)?;
    if n < 4 {
        return Err(Error::InvalidParameter("detection needs N >= 4".into()));
    }
    let sim = Simulator::<c64>::new(
        SpectralModel::time_domain(a)?,
        m,
        n,
        NoiseSpec::new(NoiseKind::GaussianComplex, seed),
    )?;
    let cov = ColumnCovariance::new(spikes.to_vec(), 1.0, Normalization::None, n)?;
    let (_, x) = sim.draw(&cov, 0)?;
    let rhat = toeplitzify(&sample_cov(&x)?, false).to_dense();
    let sw = whitened_cov(&x, &rhat, WhitenSource::UnbiasedWhiten)?;
    let c = sw.c;
    let report = spike_report(sw.eigenvalues_desc()?, Gammas::REFERENCE, c)?;
    let (lambda_minus, lambda_plus) = mp_edges(c);
    Ok(WhitenView {
        eigenvalues: report.eigenvalues,
        lambda_minus,
        lambda_plus,
        p_hat: report.p_hat,
        sigma_hat: report.sigma_hat,
        alpha_hats: report.alpha_hats,
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

// Seeds are u32 on this side: a u64 would surface in JS as a BigInt.

/// Spectrum of the Toeplitz matrix `R_M` with its Szegő reference.
#[wasm_bindgen(js_name = toeplitzSpectrum)]
pub fn toeplitz_spectrum(a: f64, m: usize, frequency: bool) -> Result<ToeplitzView, JsError> {
    toeplitz_view(a, m, frequency).map_err(js)
}

/// Spectra of `R̂⁻¹R` for the biased and unbiased estimates from one draw.
#[wasm_bindgen(js_name = ratioSpectra)]
pub fn ratio_spectra(a: f64, m: usize, n: usize, seed: u32) -> Result<RatioView, JsError> {
    ratio_view(a, m, n, seed.into()).map_err(js)
}

/// Whitened spectrum of one spiked draw, with the detected spike count.
#[wasm_bindgen(js_name = whitenedSpectrum)]
pub fn whitened_spectrum(
    a: f64,
    m: usize,
    n: usize,
    spikes: Vec<f64>,
    seed: u32,
) -> Result<WhitenView, JsError> {
    whiten_view(a, m, n, &spikes, seed.into()).map_err(js)
}
