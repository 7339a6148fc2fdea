//! Acceptance criteria at desk scale. Runs as a plain binary (no libtest
//! harness) so the PASS/FAIL lines always reach stdout. Pass criterion
//! numbers as arguments to run a subset, e.g. `cargo test --test acceptance -- 5 6`.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use lrdw_cli::config::{Experiment, ExperimentConfig};
use lrdw_cli::experiments::{self, CALIBRATION_SEED_OFFSET};
use lrdw_core::diagnostics::{
    lmax_ratio_biased, ratio_deviation, ratio_esd, trq2_profile, var_upsilon0_oracle,
};
use lrdw_core::estimators::{sample_cov, toeplitzify, upsilon_fejer};
use lrdw_core::montecarlo::run_replicates;
use lrdw_core::spectral::{build_toeplitz, SpectralDensity, SpectralModel, ToeplitzHerm};
use lrdw_core::stats::{fraction_within, log_log_slope, median};
use lrdw_core::synth::{replicate_rng, ColumnCovariance, NoiseKind, NoiseSpec, Simulator};
use lrdw_core::whiten::{detect_p, estimate_alphas, mp_edges, spike_limit, Gammas};
use lrdw_core::{c64, HermitianMatrix, Mat, Scalar};

const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn cfg(exp: Experiment) -> ExperimentConfig {
    let mut c = ExperimentConfig::defaults(exp, PathBuf::new());
    c.seed = SEED;
    c
}

fn strictly(values: &[f64], increasing: bool) -> bool {
    values
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

fn ac1() -> Outcome {
    let mut c = cfg(Experiment::Table3);
    c.grid_a = vec![0.9, 0.1];
    c.grid_m = vec![250, 500, 1000];
    c.reps = 100;
    let t = experiments::run_table3(&c).expect("table 3 run");
    let row = |a: f64| -> Vec<f64> { c.grid_m.iter().map(|&m| t.median(a, m).unwrap()).collect() };
    let (hi, lo) = (row(0.9), row(0.1));
    let m500 = hi[1];
    let pass = strictly(&hi, true) && strictly(&lo, false) && (m500 / 10.9346 - 1.0).abs() <= 0.2;
    outcome(
        pass,
        format!(
            "a=0.9 medians {hi:.4?}, a=0.1 medians {lo:.4?}; M=500 vs 10.9346: {:+.1}%",
            100.0 * (m500 / 10.9346 - 1.0)
        ),
    )
}

fn ac2() -> Outcome {
    let mut c = cfg(Experiment::Table1);
    c.reps = 200;
    let t = experiments::run_table1(&c).expect("table 1 run");
    let r = &t.rows[0];
    let band_w = 3.0 * 0.2604 / 200f64.sqrt();
    let band_rid = 3.0 * 0.2865 / 200f64.sqrt();
    let pass = (r.mean_sw - 10.0774).abs() < band_w && (r.mean_rid - 10.4032).abs() < band_rid;
    outcome(
        pass,
        format!(
            "mean λ1(S_w) = {:.4} (10.0774 ± {band_w:.4}), mean λ1(S_Rid) = {:.4} (10.4032 ± {band_rid:.4})",
            r.mean_sw, r.mean_rid
        ),
    )
}

fn calibration_config() -> ExperimentConfig {
    let mut c = cfg(Experiment::Calibrate);
    c.seed = SEED.wrapping_add(CALIBRATION_SEED_OFFSET);
    c.reps = 300;
    c
}

fn ac3(gammas: &Gammas) -> Outcome {
    let g1 = gammas.0[0];
    outcome(
        (1.03..=1.06).contains(&g1),
        format!("γ = {:.5?} (γ1 target [1.03, 1.06])", gammas.0),
    )
}

const PUBLISHED_RE_SD: f64 = 0.038512;

fn ac4(gammas: Gammas) -> Outcome {
    let mut c = cfg(Experiment::Table2);
    c.reps = 200;
    c.gammas = Some(gammas);
    let t = experiments::run_table2(&c).expect("table 2 run");
    let s = t.summary();
    let abs_re: Vec<f64> = t.relative_errors().iter().map(|e| e.abs()).collect();
    let mean_abs = abs_re.iter().sum::<f64>() / abs_re.len() as f64;
    let pass = s.correct >= 0.97 && mean_abs < 0.02;
    outcome(
        pass,
        format!(
            "p̂ = p in {:.1}% of reps; mean |α̂/α − 1| = {mean_abs:.4} over {} spikes (signed mean {:.5}, SD {:.5}; \
             published SD {PUBLISHED_RE_SD} implies mean |RE| ≈ {:.4} for normal errors)",
            100.0 * s.correct,
            abs_re.len(),
            s.re_mean,
            s.re_sd,
            PUBLISHED_RE_SD * (2.0 / std::f64::consts::PI).sqrt()
        ),
    )
}

fn ac5() -> Outcome {
    let (m, n) = (256, 1024);
    let sim = Simulator::<f64>::new(
        SpectralModel::time_domain(0.7).unwrap(),
        m,
        n,
        NoiseSpec::new(NoiseKind::GaussianReal, SEED),
    )
    .unwrap();
    let r = sim.toeplitz().to_dense();
    let cov = ColumnCovariance::identity(n);
    let devs = run_replicates(30, None, |rep| {
        let (_, x) = sim.draw(&cov, rep)?;
        let s = sample_cov(&x)?;
        Ok((
            ratio_deviation(&toeplitzify(&s, false).to_dense(), &r, 1.0)?,
            ratio_deviation(&toeplitzify(&s, true).to_dense(), &r, 1.0)?,
        ))
    })
    .unwrap();
    let unbiased = median(&devs.iter().map(|d| d.0).collect::<Vec<_>>());
    let biased = median(&devs.iter().map(|d| d.1).collect::<Vec<_>>());
    outcome(
        unbiased < 0.15 && biased > 0.2,
        format!(
            "median ratio deviation: unbiased {unbiased:.4} (< 0.15), biased {biased:.4} (> 0.2)"
        ),
    )
}

fn ac6() -> Outcome {
    let model = SpectralModel::time_domain(0.9).unwrap();
    let r512 = lmax_ratio_biased(&model, 512).unwrap();
    let r1024 = lmax_ratio_biased(&model, 1024).unwrap();
    outcome(
        r1024 < 0.95 && (r1024 - r512).abs() < 0.02,
        format!("λmax(Rᵇ)/λmax(R): M=512 {r512:.5}, M=1024 {r1024:.5}"),
    )
}

fn ac7() -> Outcome {
    let (m, n) = (512, 1024);
    let sim = Simulator::<f64>::new(
        SpectralModel::time_domain(0.9).unwrap(),
        m,
        n,
        NoiseSpec::new(NoiseKind::GaussianReal, SEED),
    )
    .unwrap();
    let (_, x) = sim.draw(&ColumnCovariance::identity(n), 0).unwrap();
    let rhat = toeplitzify(&sample_cov(&x).unwrap(), true).to_dense();
    let e = ratio_esd(&rhat, &sim.toeplitz().to_dense()).unwrap();
    let frac = fraction_within(&e, 0.9, 1.1);
    let (min, max) = (e[0], e[m - 1]);
    outcome(
        frac >= 0.9 && min < 0.6 && max > 1.4,
        format!(
            "{:.1}% in [0.9, 1.1], min {min:.4} (< 0.6), max {max:.4} (> 1.4)",
            100.0 * frac
        ),
    )
}

fn ac8() -> Outcome {
    let ms = [128.0, 256.0, 512.0];
    let slope = |a: f64| {
        let model = SpectralModel::time_domain(a).unwrap();
        let v: Vec<f64> = ms
            .iter()
            .map(|&m| var_upsilon0_oracle(&build_toeplitz(&model, m as usize).unwrap()).unwrap())
            .collect();
        log_log_slope(&ms, &v)
    };
    let (s8, s3) = (slope(0.8), slope(0.3));
    outcome(
        s8 > 1.2 && s3 < 1.1,
        format!("growth exponent: a=0.8 {s8:.4} (> 1.2), a=0.3 {s3:.4} (< 1.1)"),
    )
}

/// Spread (max/min) across `M` of `max_θ tr Q²/(f² log² M)`.
fn trq2_spread(model: &SpectralModel, fejer: bool) -> (Vec<f64>, f64) {
    let thetas: Vec<f64> = (1..=256)
        .map(|j| j as f64 * std::f64::consts::PI / 256.0)
        .collect();
    let maxima: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&m| {
            let r = build_toeplitz(model, m).unwrap();
            let p = if fejer {
                let lags = r.lags().to_vec();
                trq2_profile(&r, &move |t: f64| upsilon_fejer(&lags, t), &thetas)
            } else {
                trq2_profile(&r, &model.density() as &dyn SpectralDensity, &thetas)
            }
            .unwrap();
            assert!(p.skipped.is_empty());
            p.max()
        })
        .collect();
    let spread = maxima.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        / maxima.iter().copied().fold(f64::INFINITY, f64::min);
    (maxima, spread)
}

// f is the Fejér mean of the model lags at the same M, the evaluator the
// criterion is stated with; the exact-density spread is printed alongside
fn ac9() -> Outcome {
    let model = SpectralModel::time_domain(0.7).unwrap();
    let (maxima, spread) = trq2_spread(&model, true);
    let (_, exact) = trq2_spread(&model, false);
    outcome(
        spread < 2.0,
        format!(
            "max_θ trQ²/(f² log² M) for M=64..512: {maxima:.4?}; spread {spread:.4}× (exact density: {exact:.4}×)"
        ),
    )
}

fn ac10() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_owned());
        }
    };

    // integer-valued S keeps every partial sum exact, so any summation order agrees
    let m = 37;
    let mut rng = replicate_rng(SEED, 0, 99);
    let g = Mat::from_fn(m, m, |_, _| {
        let z = c64::gaussian(&mut rng).scale(8.0);
        c64::new(z.re.round(), z.im.round())
    });
    let s = HermitianMatrix::from_lower(g);
    for biased in [false, true] {
        let est = toeplitzify(&s, biased);
        let exact = (0..m).all(|k| {
            let mut sum = c64::new(0.0, 0.0);
            for i in 0..m - k {
                sum += s.get(i + k, i);
            }
            let oracle = sum / if biased { m } else { m - k } as f64;
            let oracle = if k == 0 {
                c64::new(oracle.re, 0.0)
            } else {
                oracle
            };
            est.lags()[k] == oracle
        });
        check("toeplitzify vs double loop", exact);
    }

    for m in [5, 64, 257] {
        let lags: Vec<c64> = (0..m)
            .map(|k| {
                c64::new(
                    1.0 / (1.0 + k as f64),
                    if k == 0 { 0.0 } else { 0.3 / (k as f64) },
                )
            })
            .collect();
        let t = ToeplitzHerm::new(lags).unwrap();
        let v: Vec<c64> = (0..m)
            .map(|i| c64::new((i as f64).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let fast = t.matvec(&v).unwrap();
        let dense = t.to_dense();
        let ok = (0..m).all(|i| {
            let acc: c64 = v
                .iter()
                .enumerate()
                .map(|(j, &vj)| dense.get(i, j) * vj)
                .sum();
            (acc - fast[i]).norm() < 1e-10
        });
        check("toeplitz matvec vs dense", ok);
    }

    let r = build_toeplitz(&SpectralModel::time_domain(0.7).unwrap(), 64)
        .unwrap()
        .to_dense();
    let root = r.sqrt().unwrap();
    let sq = root.mul_mat(root.entries()).unwrap();
    let ok = (0..64).all(|i| (0..64).all(|j| (sq[(i, j)] - r.get(i, j)).abs() < 1e-8));
    check("matrix sqrt round trip", ok);

    let (lo, hi) = mp_edges(0.6);
    check(
        "MP edges",
        (lo - 0.050_806_7).abs() < 1e-7 && (hi - 3.149_193_3).abs() < 1e-7,
    );
    check(
        "MP edges closed form",
        lo == (1.0 - 0.6f64.sqrt()).powi(2) && hi == (1.0 + 0.6f64.sqrt()).powi(2),
    );

    for c in [0.3f64, 0.6, 2.0] {
        let alphas = [1.0 + c.sqrt() + 0.05, 3.0, 10.0, 250.0];
        let mut eigs: Vec<f64> = alphas
            .iter()
            .rev()
            .map(|&a| spike_limit(a, c, 1.0).unwrap())
            .collect();
        eigs.push((1.0 + c.sqrt()).powi(2));
        let back = estimate_alphas(&eigs, 4, 1.0, c).unwrap();
        let ok = back
            .values
            .iter()
            .zip(alphas.iter().rev())
            .all(|(b, a)| (b / a - 1.0).abs() < 1e-10);
        check("α̂/ψ_c round trip", ok);
    }

    let eigs = [10.0, 9.0, 6.0, 2.90, 2.88, 2.87, 2.86, 2.85, 2.84];
    check(
        "detect_p hand trace",
        detect_p(&eigs, &Gammas::REFERENCE, 50).ok() == Some(3),
    );

    let elapsed = start.elapsed();
    check("runtime < 10 s", elapsed.as_secs_f64() < 10.0);
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("all oracle checks agree in {elapsed:.2?}")
        } else {
            format!("mismatches: {}", failures.join(", "))
        },
    )
}

fn run_cli(args: &[&str], out: &Path, threads: &str) -> bool {
    Command::new(env!("CARGO_BIN_EXE_lrdw"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--threads")
        .arg(threads)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn ac11() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["table1", "--m", "120", "--n", "72", "--reps", "4"],
        &[
            "table2",
            "--m",
            "60",
            "--n",
            "36",
            "--reps",
            "6",
            "--calibrate-reps",
            "6",
        ],
        &[
            "table3", "--grid-m", "32,48", "--grid-a", "0.9,0.1", "--reps", "5",
        ],
        &["esd-ratio", "--m", "64", "--n", "128", "--reps", "3"],
        &[
            "pseudo-spikes",
            "--m",
            "48",
            "--grid-n",
            "200,40",
            "--reps",
            "2",
        ],
        &["calibrate", "--m", "60", "--n", "36", "--reps", "6"],
        &["pca-demo", "--m", "300", "--n", "180"],
    ];
    let root = std::env::temp_dir().join(format!("lrdw-acceptance-{}", std::process::id()));
    let mut mismatched = Vec::new();
    for args in runs {
        let mut seen: Option<Vec<(String, Vec<u8>)>> = None;
        for (i, threads) in ["1", "1", "3"].iter().enumerate() {
            let dir = root.join(format!("{}-{i}", args[0]));
            std::fs::create_dir_all(&dir).unwrap();
            if !run_cli(args, &dir.join("out.csv"), threads) {
                mismatched.push(format!("{} (run failed)", args[0]));
                break;
            }
            let files = outputs(&dir);
            match &seen {
                None => seen = Some(files),
                Some(first) if *first != files => {
                    mismatched.push(format!("{} (threads={threads})", args[0]));
                    break;
                }
                _ => {}
            }
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    outcome(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "all 7 subcommands byte-identical across repeated runs and 1 vs 3 threads".into()
        } else {
            format!("differences: {}", mismatched.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let wanted = |k: u32| selected.is_empty() || selected.contains(&k);
    let mut failed = Vec::new();
    let mut report = |k: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        if !wanted(k) {
            return;
        }
        let start = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "AC{k:<2} {tag}  {name}: {} [{:.1?}]",
            o.detail,
            start.elapsed()
        );
        if !o.pass {
            failed.push(k);
        }
    };

    report(1, "norm deviation trend", &mut ac1);
    report(2, "leading whitened spikes", &mut ac2);
    let mut gammas = None;
    if wanted(3) || wanted(4) {
        let g = experiments::run_calibrate(&calibration_config())
            .expect("calibration run")
            .gammas;
        gammas = Some(g);
        report(3, "threshold calibration", &mut || ac3(&g));
    }
    report(4, "detection accuracy", &mut || {
        ac4(gammas.expect("calibrated thresholds"))
    });
    report(5, "ratio vs norm consistency", &mut ac5);
    report(6, "biased λmax deficit", &mut ac6);
    report(7, "ratio ESD concentration", &mut ac7);
    report(8, "variance oracle growth", &mut ac8);
    report(9, "tr Q² boundedness", &mut ac9);
    report(10, "oracle micro-suite", &mut ac10);
    report(11, "determinism", &mut ac11);

    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
