//! The published experiments as functions of a validated config.

use lrdw_core::diagnostics::{norm_deviation, ratio_esd};
use lrdw_core::estimators::{sample_cov, toeplitzify};
use lrdw_core::montecarlo::run_replicates;
use lrdw_core::spectral::SpectralModel;
use lrdw_core::stats::{self, auto_histogram};
use lrdw_core::synth::{
    draw_spikes, loadings_with_singular_values, signal_plus_noise, ColumnCovariance, DataMatrix,
    NoiseSpec, Normalization, Simulator,
};
use lrdw_core::whiten::{
    dual_whitened_cov, ideal_cov, leading_ratios, mp_edges, pca_compress, phase_aligned_distance,
    spike_report, top_eigenvectors, white_spectrum, whitened_cov, Gammas, WhitenSource,
};
use lrdw_core::{c64, Error, HermitianMatrix, Mat, Scalar};

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{num, Table};

type Result<T> = std::result::Result<T, Error>;

/// Number of leading eigenvalues reported by Table 1.
pub const TABLE1_ROWS: usize = 8;
/// Offset separating the calibration noise from the experiment's own noise.
pub const CALIBRATION_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;
/// Spike count mean and strength range of the detection protocol.
pub const TABLE2_POISSON_MEAN: f64 = 4.0;
pub const TABLE2_ALPHA_RANGE: (f64, f64) = (3.0, 10.0);

/// Every experiment reports through the same tabular interface.
pub trait Report {
    fn tables(&self, cfg: &ExperimentConfig) -> Vec<Table>;
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    Ok(match cfg.experiment {
        Experiment::Table1 => run_table1(cfg)?.tables(cfg),
        Experiment::Table2 => run_table2(cfg)?.tables(cfg),
        Experiment::Table3 => run_table3(cfg)?.tables(cfg),
        Experiment::EsdRatio => run_esd_ratio(cfg)?.tables(cfg),
        Experiment::PseudoSpikes => run_pseudo_spikes(cfg)?.tables(cfg),
        Experiment::Calibrate => run_calibrate(cfg)?.tables(cfg),
        Experiment::PcaDemo => run_pca_demo(cfg)?.tables(cfg),
    })
}

fn model(a: f64) -> Result<SpectralModel> {
    SpectralModel::time_domain(a)
}

fn noise(cfg: &ExperimentConfig) -> NoiseSpec {
    NoiseSpec::new(cfg.noise, cfg.seed)
}

/// Runs `$body` with `$t` bound to the scalar field matching the noise kind.
macro_rules! with_field {
    ($cfg:expr, $t:ident => $body:expr) => {
        if $cfg.noise.is_complex() {
            type $t = c64;
            $body
        } else {
            type $t = f64;
            $body
        }
    };
}

// ---------------------------------------------------------------- table 1

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub i: usize,
    pub mean_sw: f64,
    pub sd_sw: f64,
    pub mean_rid: f64,
    pub sd_rid: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Result {
    pub rows: Vec<Table1Row>,
}

/// Leading eigenvalues of `S_w` and `S_Rid`, both from the same `Z`.
pub fn run_table1(cfg: &ExperimentConfig) -> Result<Table1Result> {
    let cov = ColumnCovariance::new(cfg.spikes.clone(), cfg.sigma2, cfg.normalize, cfg.n)?;
    let k = TABLE1_ROWS.min(cfg.n);
    let per_rep: Vec<(Vec<f64>, Vec<f64>)> = with_field!(cfg, T => {
        let sim = Simulator::<T>::new(model(cfg.a)?, cfg.m, cfg.n, noise(cfg))?;
        run_replicates(cfg.reps, cfg.threads, |rep| {
            let (z, x) = sim.draw(&cov, rep)?;
            let est = toeplitzify(&sample_cov(&x)?, false);
            let sw = whitened_cov(&x, &est.to_dense(), WhitenSource::UnbiasedWhiten)?.eigenvalues_desc()?;
            let rid = ideal_cov(&z, &cov)?.eigenvalues_desc()?;
            Ok((sw[..k].to_vec(), rid[..k].to_vec()))
        })?
    });
    let rows = (0..k)
        .map(|i| {
            let sw: Vec<f64> = per_rep.iter().map(|r| r.0[i]).collect();
            let rid: Vec<f64> = per_rep.iter().map(|r| r.1[i]).collect();
            Table1Row {
                i: i + 1,
                mean_sw: stats::mean(&sw),
                sd_sw: stats::sd(&sw),
                mean_rid: stats::mean(&rid),
                sd_rid: stats::sd(&rid),
                alpha: cov.alphas().get(i).copied().unwrap_or(1.0),
            }
        })
        .collect();
    Ok(Table1Result { rows })
}

impl Report for Table1Result {
    fn tables(&self, _: &ExperimentConfig) -> Vec<Table> {
        let mut t = Table::new(
            "table1",
            &["i", "mean_Sw", "sd_Sw", "mean_SRid", "sd_SRid", "alpha_i"],
        );
        for r in &self.rows {
            t.push(vec![
                r.i.to_string(),
                num(r.mean_sw),
                num(r.sd_sw),
                num(r.mean_rid),
                num(r.sd_rid),
                num(r.alpha),
            ]);
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- calibration

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub gammas: Gammas,
    pub ratios: Vec<[f64; 3]>,
}

fn calibration_config(cfg: &ExperimentConfig, seed: u64, reps: usize) -> ExperimentConfig {
    ExperimentConfig {
        seed,
        reps,
        ..cfg.clone()
    }
}

/// White-model (`C = I`) leading ratios and their maxima.
pub fn run_calibrate(cfg: &ExperimentConfig) -> Result<CalibrationResult> {
    let ratios = with_field!(cfg, T => {
        let sim = Simulator::<T>::new(model(cfg.a)?, cfg.m, cfg.n, noise(cfg))?;
        run_replicates(cfg.reps, cfg.threads, |rep| leading_ratios(&white_spectrum(&sim, rep)?))?
    });
    Ok(CalibrationResult {
        gammas: lrdw_core::whiten::gammas_from_ratios(&ratios),
        ratios,
    })
}

impl Report for CalibrationResult {
    fn tables(&self, _: &ExperimentConfig) -> Vec<Table> {
        let mut g = Table::new("gammas", &["gamma1", "gamma2", "gamma3"]);
        g.push(self.gammas.0.iter().map(|&v| num(v)).collect());
        let mut r = Table::new("ratios", &["replicate", "ratio1", "ratio2", "ratio3"]);
        for (i, row) in self.ratios.iter().enumerate() {
            r.push(vec![i.to_string(), num(row[0]), num(row[1]), num(row[2])]);
        }
        vec![g, r]
    }
}

// ---------------------------------------------------------------- table 2

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Replicate {
    pub replicate: u64,
    pub alphas: Vec<f64>,
    /// `None` when no `k ≤ k_max` passes the triple test.
    pub p_hat: Option<usize>,
    pub alpha_hats: Vec<f64>,
}

impl Table2Replicate {
    pub fn p(&self) -> usize {
        self.alphas.len()
    }

    /// `α̂_i/α_i − 1`, only when the count is right and non-zero.
    pub fn relative_errors(&self) -> Vec<f64> {
        if self.p_hat != Some(self.p()) || self.p() == 0 {
            return Vec::new();
        }
        self.alpha_hats
            .iter()
            .zip(&self.alphas)
            .map(|(h, a)| h / a - 1.0)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Summary {
    pub correct: f64,
    pub correct_nonzero: f64,
    pub correct_zero: f64,
    pub over_nonzero: f64,
    pub over_zero: f64,
    pub under: f64,
    pub undetected: f64,
    pub re_mean: f64,
    pub re_sd: f64,
    pub re_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Result {
    pub gammas: Gammas,
    pub calibrated: bool,
    pub replicates: Vec<Table2Replicate>,
}

impl Table2Result {
    pub fn relative_errors(&self) -> Vec<f64> {
        self.replicates
            .iter()
            .flat_map(|r| r.relative_errors())
            .collect()
    }

    pub fn summary(&self) -> Table2Summary {
        let total = self.replicates.len() as f64;
        let frac = |pred: &dyn Fn(&Table2Replicate) -> bool| {
            self.replicates.iter().filter(|r| pred(r)).count() as f64 / total
        };
        let re = self.relative_errors();
        Table2Summary {
            correct: frac(&|r| r.p_hat == Some(r.p())),
            correct_nonzero: frac(&|r| r.p_hat == Some(r.p()) && r.p() != 0),
            correct_zero: frac(&|r| r.p_hat == Some(0) && r.p() == 0),
            over_nonzero: frac(&|r| r.p() != 0 && r.p_hat.is_some_and(|p| p > r.p())),
            over_zero: frac(&|r| r.p() == 0 && r.p_hat.is_some_and(|p| p > 0)),
            under: frac(&|r| r.p_hat.is_some_and(|p| p < r.p())),
            undetected: frac(&|r| r.p_hat.is_none()),
            re_mean: stats::mean(&re),
            re_sd: stats::sd(&re),
            re_count: re.len(),
        }
    }
}

/// Detection protocol: `p ~ Poisson(4)`, `α_i ~ U[3, 10]`, `σ² = 1`, then
/// `p̂`, `σ̂`, `α̂` from the whitened spectrum.
pub fn run_table2(cfg: &ExperimentConfig) -> Result<Table2Result> {
    let (gammas, calibrated) = match cfg.gammas {
        Some(g) => (g, false),
        None => {
            let cal = calibration_config(
                cfg,
                cfg.seed.wrapping_add(CALIBRATION_SEED_OFFSET),
                cfg.calibrate_reps,
            );
            (run_calibrate(&cal)?.gammas, true)
        }
    };
    let c = cfg.n as f64 / cfg.m as f64;
    let (lo, hi) = TABLE2_ALPHA_RANGE;
    let replicates = with_field!(cfg, T => {
        let sim = Simulator::<T>::new(model(cfg.a)?, cfg.m, cfg.n, noise(cfg))?;
        run_replicates(cfg.reps, cfg.threads, |rep| {
            let mut alphas = draw_spikes(cfg.seed, rep, TABLE2_POISSON_MEAN, lo, hi)?;
            alphas.truncate(cfg.n);
            let cov = ColumnCovariance::new(alphas.clone(), cfg.sigma2, Normalization::None, cfg.n)?;
            let (_, x) = sim.draw(&cov, rep)?;
            let est = toeplitzify(&sample_cov(&x)?, false);
            let eigs = whitened_cov(&x, &est.to_dense(), WhitenSource::UnbiasedWhiten)?.eigenvalues_desc()?;
            match spike_report(eigs, gammas, c) {
                Ok(report) => Ok(Table2Replicate {
                    replicate: rep,
                    alphas,
                    p_hat: Some(report.p_hat),
                    alpha_hats: report.alpha_hats,
                }),
                Err(Error::NoDetection { .. }) => Ok(Table2Replicate {
                    replicate: rep,
                    alphas,
                    p_hat: None,
                    alpha_hats: Vec::new(),
                }),
                Err(e) => Err(e),
            }
        })?
    });
    Ok(Table2Result {
        gammas,
        calibrated,
        replicates,
    })
}

impl Report for Table2Result {
    fn tables(&self, cfg: &ExperimentConfig) -> Vec<Table> {
        let join = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";");
        let mut reps = Table::new(
            "table2",
            &[
                "replicate",
                "p",
                "p_hat",
                "alphas",
                "alpha_hats",
                "relative_errors",
            ],
        );
        for r in &self.replicates {
            reps.push(vec![
                r.replicate.to_string(),
                r.p().to_string(),
                r.p_hat
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "none".into()),
                join(&r.alphas),
                join(&r.alpha_hats),
                join(&r.relative_errors()),
            ]);
        }
        let s = self.summary();
        let mut summary = Table::new("summary", &["quantity", "value"]);
        let g = self.gammas.0;
        for (k, v) in [
            ("gamma1", g[0]),
            ("gamma2", g[1]),
            ("gamma3", g[2]),
            ("gammas_calibrated", if self.calibrated { 1.0 } else { 0.0 }),
            ("prop_p_hat_eq_p", s.correct),
            ("prop_p_hat_eq_p_nonzero", s.correct_nonzero),
            ("prop_p_hat_eq_p_zero", s.correct_zero),
            ("prop_p_hat_gt_p_nonzero", s.over_nonzero),
            ("prop_p_hat_gt_p_zero", s.over_zero),
            ("prop_p_hat_lt_p", s.under),
            ("prop_no_detection", s.undetected),
            ("re_mean", s.re_mean),
            ("re_sd", s.re_sd),
            ("re_count", s.re_count as f64),
        ] {
            summary.push(vec![k.into(), num(v)]);
        }
        let hist = Table::histogram(
            "re_hist",
            &auto_histogram(&self.relative_errors(), cfg.bins),
        );
        vec![reps, summary, hist]
    }
}

// ---------------------------------------------------------------- table 3

#[derive(Debug, Clone, PartialEq)]
pub struct Table3Cell {
    pub a: f64,
    pub m: usize,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table3Result {
    pub cells: Vec<Table3Cell>,
}

impl Table3Result {
    pub fn median(&self, a: f64, m: usize) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.a == a && c.m == m)
            .map(|c| c.median)
    }
}

/// Medians of `‖R̂_M − R_M‖` with `C = I`, `N = 2M`.
pub fn run_table3(cfg: &ExperimentConfig) -> Result<Table3Result> {
    let mut cells = Vec::new();
    for &a in &cfg.grid_a {
        for &m in &cfg.grid_m {
            let n = 2 * m;
            let devs: Vec<f64> = with_field!(cfg, T => {
                let sim = Simulator::<T>::new(model(a)?, m, n, noise(cfg))?;
                let r = sim.toeplitz().to_field::<T>().to_dense();
                let cov = ColumnCovariance::identity(n);
                run_replicates(cfg.reps, cfg.threads, |rep| {
                    let (_, x) = sim.draw(&cov, rep)?;
                    let est = toeplitzify(&sample_cov(&x)?, false);
                    norm_deviation(&est.to_dense(), &r, 1.0)
                })?
            });
            cells.push(Table3Cell {
                a,
                m,
                median: stats::median(&devs),
            });
        }
    }
    Ok(Table3Result { cells })
}

impl Report for Table3Result {
    fn tables(&self, _: &ExperimentConfig) -> Vec<Table> {
        let mut t = Table::new("table3", &["a", "M", "N", "median_norm_deviation"]);
        for c in &self.cells {
            t.push(vec![
                num(c.a),
                c.m.to_string(),
                (2 * c.m).to_string(),
                num(c.median),
            ]);
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- ratio ESD

#[derive(Debug, Clone, PartialEq)]
pub struct EsdSummary {
    pub min: f64,
    pub max: f64,
    pub frac_near_one: f64,
}

impl EsdSummary {
    pub fn of(values: &[f64]) -> Self {
        Self {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            frac_near_one: stats::fraction_within(values, 0.9, 1.1),
        }
    }
}

/// Spectra of `R̂⁻¹R` for both estimators, pooled over replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct EsdRatioResult {
    pub biased: Vec<f64>,
    pub unbiased: Vec<f64>,
}

pub fn run_esd_ratio(cfg: &ExperimentConfig) -> Result<EsdRatioResult> {
    let per_rep: Vec<(Vec<f64>, Vec<f64>)> = with_field!(cfg, T => {
        let sim = Simulator::<T>::new(model(cfg.a)?, cfg.m, cfg.n, noise(cfg))?;
        let r = sim.toeplitz().to_field::<T>().to_dense();
        let cov = ColumnCovariance::identity(cfg.n);
        run_replicates(cfg.reps, cfg.threads, |rep| {
            let (_, x) = sim.draw(&cov, rep)?;
            let s = sample_cov(&x)?;
            // eigenvalues of R̂⁻¹R are reciprocals of those of R^{-1/2} R̂ R^{-1/2}
            let inverse = |biased: bool| -> Result<Vec<f64>> {
                let mut v: Vec<f64> = ratio_esd(&toeplitzify(&s, biased).to_dense(), &r)?
                    .into_iter()
                    .map(|l| 1.0 / l)
                    .collect();
                v.reverse();
                Ok(v)
            };
            Ok((inverse(true)?, inverse(false)?))
        })?
    });
    Ok(EsdRatioResult {
        biased: per_rep.iter().flat_map(|r| r.0.iter().copied()).collect(),
        unbiased: per_rep.iter().flat_map(|r| r.1.iter().copied()).collect(),
    })
}

impl Report for EsdRatioResult {
    fn tables(&self, cfg: &ExperimentConfig) -> Vec<Table> {
        let mut summary = Table::new("esd_ratio", &["estimator", "min", "max", "frac_in_0.9_1.1"]);
        for (name, v) in [("biased", &self.biased), ("unbiased", &self.unbiased)] {
            let s = EsdSummary::of(v);
            summary.push(vec![
                name.into(),
                num(s.min),
                num(s.max),
                num(s.frac_near_one),
            ]);
        }
        vec![
            summary,
            Table::histogram("biased_hist", &auto_histogram(&self.biased, cfg.bins)),
            Table::histogram("unbiased_hist", &auto_histogram(&self.unbiased, cfg.bins)),
        ]
    }
}

// ---------------------------------------------------------------- pseudo-spikes

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPanel {
    pub n: usize,
    pub biased: bool,
    /// Aspect ratio of the plotted matrix (`M/N` for the dual, `N/M` otherwise).
    pub mp_ratio: f64,
    pub lambda_plus: f64,
    pub eigenvalues: Vec<f64>,
}

impl PseudoPanel {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Eigenvalues above the Marchenko–Pastur edge plus 0.1.
    pub fn beyond_edge(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| l > self.lambda_plus + 0.1)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSpikesResult {
    pub panels: Vec<PseudoPanel>,
}

/// Whitened spectra for the biased and unbiased estimates at each `N`. When
/// `N > M` the `M×M` dual `N⁻¹ R̂^{-1/2} X Xᴴ R̂^{-1/2}` is used, else the
/// `N×N` matrix `M⁻¹ Xᴴ R̂⁻¹ X`; either way the reference law has ratio ≤ 1.
pub fn run_pseudo_spikes(cfg: &ExperimentConfig) -> Result<PseudoSpikesResult> {
    let mut panels = Vec::new();
    for &n in &cfg.grid_n {
        let per_rep: Vec<Vec<PseudoPanel>> = with_field!(cfg, T => {
            let sim = Simulator::<T>::new(model(cfg.a)?, cfg.m, n, noise(cfg))?;
            let cov = ColumnCovariance::identity(n);
            run_replicates(cfg.reps, cfg.threads, |rep| {
                let (_, x) = sim.draw(&cov, rep)?;
                let s = sample_cov(&x)?;
                [true, false]
                    .into_iter()
                    .map(|biased| pseudo_panel(&x, &s, n, biased))
                    .collect::<Result<Vec<_>>>()
            })?
        });
        for which in 0..2 {
            let mut panel = per_rep[0][which].clone();
            panel.eigenvalues = per_rep
                .iter()
                .flat_map(|r| r[which].eigenvalues.iter().copied())
                .collect();
            panels.push(panel);
        }
    }
    Ok(PseudoSpikesResult { panels })
}

fn pseudo_panel<T: Scalar>(
    x: &DataMatrix<T>,
    s: &HermitianMatrix<T>,
    n: usize,
    biased: bool,
) -> Result<PseudoPanel> {
    let m = x.m();
    let rhat = toeplitzify(s, biased).to_dense();
    let source = if biased {
        WhitenSource::BiasedWhiten
    } else {
        WhitenSource::UnbiasedWhiten
    };
    let w = if n > m {
        dual_whitened_cov(x, &rhat, &vec![1.0; n], source)?
    } else {
        whitened_cov(x, &rhat, source)?
    };
    Ok(PseudoPanel {
        n,
        biased,
        mp_ratio: w.c,
        lambda_plus: mp_edges(w.c).1,
        eigenvalues: w.eigenvalues_desc()?,
    })
}

impl Report for PseudoSpikesResult {
    fn tables(&self, cfg: &ExperimentConfig) -> Vec<Table> {
        let mut summary = Table::new(
            "pseudo_spikes",
            &[
                "N",
                "c",
                "estimator",
                "mp_ratio",
                "lambda_plus",
                "lambda_max",
                "lambda_max_over_edge",
                "count_beyond_edge_plus_0.1",
            ],
        );
        let mut hist = Table::new(
            "hist",
            &["N", "estimator", "bin_left", "bin_right", "count"],
        );
        for p in &self.panels {
            let name = if p.biased { "biased" } else { "unbiased" };
            summary.push(vec![
                p.n.to_string(),
                num(p.n as f64 / cfg.m as f64),
                name.into(),
                num(p.mp_ratio),
                num(p.lambda_plus),
                num(p.lambda_max()),
                num(p.lambda_max() / p.lambda_plus),
                p.beyond_edge().to_string(),
            ]);
            for b in auto_histogram(&p.eigenvalues, cfg.bins) {
                hist.push(vec![
                    p.n.to_string(),
                    name.into(),
                    num(b.left),
                    num(b.right),
                    b.count.to_string(),
                ]);
            }
        }
        vec![summary, hist]
    }
}

// ---------------------------------------------------------------- PCA demo

#[derive(Debug, Clone, PartialEq)]
pub struct PcaDemoResult {
    pub p_hat: usize,
    /// `X̂_w*`, `p̂×M`.
    pub whitened: Mat<c64>,
    /// `X̂_Rid* = Ŷ_Rid R^{1/2}`, `p̂×M`.
    pub ideal: Mat<c64>,
    /// `min_ϱ ‖v_(w)k − ϱ v_k‖` per component.
    pub alignment: Vec<f64>,
}

impl PcaDemoResult {
    fn row_sup(m: &Mat<c64>, k: usize) -> f64 {
        (0..m.ncols()).map(|t| m[(k, t)].norm()).fold(0.0, f64::max)
    }

    /// `sup_t |X̂_w*(k,t) − X̂_Rid*(k,t)| / sup_t |X̂_Rid*(k,t)|`.
    pub fn relative_difference(&self, k: usize) -> f64 {
        let diff = Mat::from_fn(1, self.ideal.ncols(), |_, t| {
            self.whitened[(k, t)] - self.ideal[(k, t)]
        });
        Self::row_sup(&diff, 0) / Self::row_sup(&self.ideal, k)
    }
}

/// PCA of `X* = Y R^{1/2}` with `Y` a complex signal-plus-noise panel;
/// compares the whitened principal series with the oracle ones from `Y`.
/// Oracle eigenvectors are phase-matched to the whitened ones, since PCs are
/// only defined up to a unit scalar.
pub fn run_pca_demo(cfg: &ExperimentConfig) -> Result<PcaDemoResult> {
    let (m, n) = (cfg.m, cfg.n);
    let singular: Vec<f64> = cfg.gram_eigenvalues.iter().map(|e| e.sqrt()).collect();
    let a = loadings_with_singular_values(n, &singular, cfg.seed)?;
    let (y, _) = signal_plus_noise(a.as_ref(), cfg.sigma2.sqrt(), m, cfg.seed, 0)?;
    let r = lrdw_core::spectral::build_toeplitz(&model(cfg.a)?, m)?;
    let rsqrt = r.to_field::<c64>().to_dense().sqrt()?;
    let yh = y.adjoint().to_owned();
    let x = DataMatrix::new(rsqrt.mul_mat(yh.as_ref())?, Default::default());

    let rhat = toeplitzify(&sample_cov(&x)?, false).to_dense();
    let sw = whitened_cov(&x, &rhat, WhitenSource::UnbiasedWhiten)?;
    let gammas = cfg.gammas.unwrap_or(Gammas::REFERENCE);
    let c = n as f64 / m as f64;
    let p_hat = spike_report(sw.eigenvalues_desc()?, gammas, c)?.p_hat;
    let (whitened, _) = pca_compress(&x, &sw, p_hat, &rhat.inv_sqrt()?)?;

    // oracle: eigenvectors of S_Rid = M⁻¹ Y Yᴴ, then Ŷ_Rid R^{1/2}
    let s_rid = ideal_cov(&yh, &ColumnCovariance::identity(n))?;
    let v_rid = top_eigenvectors(&s_rid.matrix, p_hat)?;
    let v_w = top_eigenvectors(&sw.matrix, p_hat)?;
    let mut alignment = Vec::with_capacity(p_hat);
    let mut v_matched = v_rid.clone();
    for k in 0..p_hat {
        let u: Vec<c64> = (0..n).map(|i| v_w[(i, k)]).collect();
        let v: Vec<c64> = (0..n).map(|i| v_rid[(i, k)]).collect();
        alignment.push(phase_aligned_distance(&u, &v));
        let inner = v
            .iter()
            .zip(&u)
            .fold(c64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
        let phase = if inner.norm() > 0.0 {
            inner / inner.norm()
        } else {
            c64::new(1.0, 0.0)
        };
        for i in 0..n {
            v_matched[(i, k)] = v_rid[(i, k)] * phase;
        }
    }
    let y_rid = lrdw_core::linalg::mat_adj_mul(v_matched.as_ref(), y.as_ref());
    let ideal = lrdw_core::linalg::mat_mul(y_rid.as_ref(), rsqrt.entries());
    Ok(PcaDemoResult {
        p_hat,
        whitened,
        ideal,
        alignment,
    })
}

impl Report for PcaDemoResult {
    fn tables(&self, _: &ExperimentConfig) -> Vec<Table> {
        let p = self.p_hat;
        let mut columns = vec!["t".to_string()];
        for prefix in ["re_Xw", "re_XRid", "abs_diff"] {
            columns.extend((1..=p).map(|k| format!("{prefix}{k}")));
        }
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut series = Table::new("pca_series", &cols);
        for t in 0..self.whitened.ncols() {
            let mut row = vec![t.to_string()];
            row.extend((0..p).map(|k| num(self.whitened[(k, t)].re)));
            row.extend((0..p).map(|k| num(self.ideal[(k, t)].re)));
            row.extend((0..p).map(|k| num((self.whitened[(k, t)] - self.ideal[(k, t)]).norm())));
            series.push(row);
        }
        let mut summary = Table::new(
            "summary",
            &["component", "alignment_distance", "relative_sup_difference"],
        );
        for k in 0..p {
            summary.push(vec![
                (k + 1).to_string(),
                num(self.alignment[k]),
                num(self.relative_difference(k)),
            ]);
        }
        vec![series, summary]
    }
}
