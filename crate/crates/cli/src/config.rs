//! Command-line arguments and their validation into an experiment config.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use lrdw_core::synth::{NoiseKind, Normalization};
use lrdw_core::whiten::Gammas;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Table1,
    Table2,
    Table3,
    EsdRatio,
    PseudoSpikes,
    Calibrate,
    PcaDemo,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self
            .to_possible_value()
            .map(|v| v.get_name().to_owned())
            .unwrap_or_default();
        f.write_str(&name)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lrdw",
    version,
    about = "Toeplitz whitening experiments for long-range-dependent time series",
    after_help = "Unset parameters take the values of the corresponding published experiment."
)]
pub struct Cli {
    pub experiment: Experiment,
    /// Time dimension M (rows of X).
    #[arg(long)]
    pub m: Option<usize>,
    /// Series dimension N (columns of X).
    #[arg(long)]
    pub n: Option<usize>,
    /// LRD exponent a in (0, 1).
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Spike strengths alpha_i of C_N.
    #[arg(long, value_delimiter = ',')]
    pub spikes: Option<Vec<f64>>,
    /// Noise level sigma^2 (ignored under trace normalization).
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Rescale C_N so that tr C_N = N.
    #[arg(long)]
    pub trace_normalize: Option<bool>,
    #[arg(long)]
    pub noise: Option<String>,
    /// Output CSV path; companion tables get a suffix before the extension.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "LRDW_THREADS")]
    pub threads: Option<usize>,
    /// Detection thresholds g1,g2,g3 (skips calibration).
    #[arg(long, value_delimiter = ',', conflicts_with = "calibrate_reps")]
    pub gammas: Option<Vec<f64>>,
    /// Replicates used to calibrate the detection thresholds.
    #[arg(long)]
    pub calibrate_reps: Option<usize>,
    /// table3: exponents to sweep.
    #[arg(long, value_delimiter = ',')]
    pub grid_a: Option<Vec<f64>>,
    /// table3: time dimensions to sweep (N = 2M).
    #[arg(long, value_delimiter = ',')]
    pub grid_m: Option<Vec<usize>>,
    /// pseudo-spikes: series dimensions to sweep.
    #[arg(long, value_delimiter = ',')]
    pub grid_n: Option<Vec<usize>>,
    /// pca-demo: eigenvalues of AᴴA (squared singular values of the loadings).
    #[arg(long, value_delimiter = ',')]
    pub gram_eigenvalues: Option<Vec<f64>>,
    /// Histogram bin count.
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub m: usize,
    pub n: usize,
    pub a: f64,
    pub reps: usize,
    pub seed: u64,
    pub spikes: Vec<f64>,
    pub sigma2: f64,
    pub normalize: Normalization,
    pub noise: NoiseKind,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub gammas: Option<Gammas>,
    pub calibrate_reps: usize,
    pub grid_a: Vec<f64>,
    pub grid_m: Vec<usize>,
    pub grid_n: Vec<usize>,
    pub gram_eigenvalues: Vec<f64>,
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl ExperimentConfig {
    /// Defaults of the published experiment, before command-line overrides.
    pub fn defaults(experiment: Experiment, out: PathBuf) -> Self {
        let mut cfg = ExperimentConfig {
            experiment,
            m: 833,
            n: 500,
            a: 0.7,
            reps: 1000,
            seed: 1,
            spikes: Vec::new(),
            sigma2: 1.0,
            normalize: Normalization::None,
            noise: NoiseKind::GaussianComplex,
            out,
            threads: None,
            gammas: None,
            calibrate_reps: 1000,
            grid_a: vec![0.9, 0.7, 0.5, 0.3, 0.1],
            grid_m: vec![250, 500, 1000, 2000],
            grid_n: vec![8000, 3000, 800],
            gram_eigenvalues: vec![5.39, 19.97, 47.25],
            bins: 60,
        };
        match experiment {
            Experiment::Table1 => {
                cfg.spikes = vec![10.0, 10.0, 6.0, 4.0, 4.0, 4.0];
                cfg.normalize = Normalization::TraceN;
            }
            Experiment::Table2 | Experiment::Calibrate | Experiment::PcaDemo => {
                if experiment == Experiment::PcaDemo {
                    cfg.reps = 1;
                }
            }
            Experiment::Table3 => {
                cfg.reps = 500;
                cfg.noise = NoiseKind::GaussianReal;
            }
            Experiment::EsdRatio => {
                cfg.m = 1000;
                cfg.n = 2000;
                cfg.a = 0.9;
                cfg.reps = 1;
                cfg.noise = NoiseKind::GaussianReal;
            }
            Experiment::PseudoSpikes => {
                cfg.m = 1000;
                cfg.n = 8000;
                cfg.a = 0.9;
                cfg.reps = 1;
                cfg.noise = NoiseKind::GaussianReal;
            }
        }
        cfg
    }

    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let mut cfg = Self::defaults(cli.experiment, cli.out);
        if let Some(m) = cli.m {
            cfg.m = m;
        }
        if let Some(n) = cli.n {
            cfg.n = n;
            if cfg.experiment == Experiment::PseudoSpikes && cli.grid_n.is_none() {
                cfg.grid_n = vec![n];
            }
        }
        if let Some(a) = cli.a {
            cfg.a = a;
        }
        if let Some(reps) = cli.reps {
            cfg.reps = reps;
        }
        cfg.seed = cli.seed;
        if let Some(spikes) = cli.spikes {
            cfg.spikes = spikes;
        }
        if let Some(s2) = cli.sigma2 {
            cfg.sigma2 = s2;
        }
        if let Some(t) = cli.trace_normalize {
            cfg.normalize = if t {
                Normalization::TraceN
            } else {
                Normalization::None
            };
        }
        if let Some(noise) = cli.noise {
            cfg.noise = noise.parse().or_else(|e| invalid(format!("{e}")))?;
        }
        cfg.threads = cli.threads;
        if let Some(g) = cli.gammas {
            let [g1, g2, g3] = g[..] else {
                return invalid(format!(
                    "--gammas needs exactly three values, got {}",
                    g.len()
                ));
            };
            cfg.gammas = Some(Gammas([g1, g2, g3]));
        }
        if let Some(r) = cli.calibrate_reps {
            cfg.calibrate_reps = r;
        }
        if let Some(g) = cli.grid_a {
            cfg.grid_a = g;
        }
        if let Some(g) = cli.grid_m {
            cfg.grid_m = g;
        }
        if let Some(g) = cli.grid_n {
            cfg.grid_n = g;
        }
        if let Some(s) = cli.gram_eigenvalues {
            cfg.gram_eigenvalues = s;
        }
        cfg.bins = cli.bins;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m == 0 || self.n == 0 {
            return invalid("--m and --n must be positive");
        }
        if !(self.a > 0.0 && self.a < 1.0) {
            return invalid(format!("--a must lie in (0, 1), got {}", self.a));
        }
        if self.reps == 0 {
            return invalid("--reps must be positive");
        }
        if self.spikes.iter().any(|&s| !(s > 1.0 && s.is_finite())) {
            return invalid("--spikes must all exceed 1");
        }
        if self.spikes.len() > self.n {
            return invalid("more spikes than series (--n)");
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return invalid("--sigma2 must be positive");
        }
        if self.threads == Some(0) {
            return invalid("--threads must be positive");
        }
        if let Some(Gammas(g)) = self.gammas {
            if g.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                return invalid("--gammas must be positive");
            }
        }
        if self.calibrate_reps == 0 {
            return invalid("--calibrate-reps must be positive");
        }
        if self.bins == 0 {
            return invalid("--bins must be positive");
        }
        match self.experiment {
            Experiment::Table1 | Experiment::Table2 | Experiment::Calibrate if self.n < 4 => {
                invalid("eigenvalue ratio tests need --n >= 4")
            }
            Experiment::Table3 => {
                if self.grid_a.is_empty() || self.grid_a.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
                    return invalid("--grid-a values must lie in (0, 1)");
                }
                if self.grid_m.is_empty() || self.grid_m.contains(&0) {
                    return invalid("--grid-m values must be positive");
                }
                Ok(())
            }
            Experiment::PseudoSpikes if self.grid_n.is_empty() || self.grid_n.contains(&0) => {
                invalid("--grid-n values must be positive")
            }
            Experiment::PcaDemo => {
                if self
                    .gram_eigenvalues
                    .iter()
                    .any(|&s| !(s >= 0.0 && s.is_finite()))
                {
                    return invalid("--gram-eigenvalues must be non-negative");
                }
                if self.gram_eigenvalues.len() > self.n {
                    return invalid("more loadings than series (--n)");
                }
                if !self.noise.is_complex() {
                    return invalid(
                        "pca-demo uses complex Gaussian signals; pass --noise gaussian-complex",
                    );
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// One-line description for the `# config:` header. Thread count and
    /// output path are omitted so outputs compare byte for byte.
    pub fn header(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut parts = vec![format!("experiment={}", self.experiment)];
        // sweeps replace the scalar geometry
        let swept = self.experiment == Experiment::Table3;
        if !swept {
            parts.push(format!("m={}", self.m));
            if self.experiment != Experiment::PseudoSpikes {
                parts.push(format!("n={}", self.n));
            }
            parts.push(format!("a={}", self.a));
        }
        parts.push(format!("reps={}", self.reps));
        parts.push(format!("seed={}", self.seed));
        parts.push(format!("noise={}", self.noise));
        match self.experiment {
            Experiment::Table1 | Experiment::Table2 => {
                parts.push(format!("spikes={}", list(&self.spikes)));
                parts.push(format!("sigma2={}", self.sigma2));
                parts.push(format!(
                    "normalize={}",
                    match self.normalize {
                        Normalization::None => "none",
                        Normalization::TraceN => "trace-n",
                    }
                ));
            }
            Experiment::Table3 => {
                parts.push(format!("grid_a={}", list(&self.grid_a)));
                parts.push(format!(
                    "grid_m={}",
                    self.grid_m
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
            Experiment::PseudoSpikes => parts.push(format!(
                "grid_n={}",
                self.grid_n
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )),
            Experiment::PcaDemo => {
                parts.push(format!("gram_eigenvalues={}", list(&self.gram_eigenvalues)))
            }
            _ => {}
        }
        if matches!(self.experiment, Experiment::Table2) {
            match self.gammas {
                Some(Gammas(g)) => parts.push(format!("gammas={}", list(&g))),
                None => parts.push(format!("calibrate_reps={}", self.calibrate_reps)),
            }
        }
        if matches!(self.experiment, Experiment::PcaDemo) {
            if let Some(Gammas(g)) = self.gammas {
                parts.push(format!("gammas={}", list(&g)));
            }
        }
        parts.push(format!("bins={}", self.bins));
        parts.join(" ")
    }
}
