use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clap::Parser;
use lrdw_cli::config::{Cli, Experiment, ExperimentConfig};
use lrdw_cli::output::table_path;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lrdw-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn lrdw(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrdw"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("LRDW_THREADS")
        .output()
        .unwrap()
}

fn parse(args: &[&str]) -> ExperimentConfig {
    let mut argv = vec!["lrdw"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", "x.csv"]);
    ExperimentConfig::from_cli(Cli::try_parse_from(argv).unwrap()).unwrap()
}

#[test]
fn success_writes_header_and_companions() {
    let dir = scratch("ok");
    let out = dir.join("esd.csv");
    let run = lrdw(
        &["esd-ratio", "--m", "64", "--n", "128", "--bins", "10"],
        &out,
    );
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    for path in [
        out.clone(),
        dir.join("esd.biased_hist.csv"),
        dir.join("esd.unbiased_hist.csv"),
    ] {
        let text = fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        assert!(
            first.starts_with("# config: experiment=esd-ratio m=64 n=128"),
            "{first}"
        );
        assert!(!first.contains("threads"));
    }
    let hist = fs::read_to_string(dir.join("esd.biased_hist.csv")).unwrap();
    let body: Vec<&str> = hist.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "bin_left,bin_right,count");
    assert_eq!(body.len(), 11);
    let total: u64 = body[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 64);
}

#[test]
fn config_errors_exit_two() {
    let dir = scratch("config");
    let out = dir.join("x.csv");
    for args in [
        &["table1", "--a", "1.5"][..],
        &["table3", "--reps", "0"],
        &["table2", "--gammas", "1.0,1.0"],
        &["table2", "--spikes", "0.5"],
        &["pca-demo", "--noise", "gaussian-real"],
        &["calibrate", "--noise", "cauchy"],
        &["no-such-experiment"],
        &["table1", "--threads", "0"],
    ] {
        let run = lrdw(args, &out);
        assert_eq!(run.status.code(), Some(2), "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn numerical_failure_exits_three() {
    let dir = scratch("numerical");
    // two series give an indefinite unbiased Toeplitz estimate at M = 60
    let run = lrdw(
        &["pseudo-spikes", "--m", "60", "--grid-n", "2"],
        &dir.join("x.csv"),
    );
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains("numerical failure"));
}

#[test]
fn unwritable_output_exits_one() {
    let dir = scratch("io");
    let out = dir.join("missing").join("x.csv");
    let run = lrdw(
        &["table3", "--grid-m", "16", "--grid-a", "0.5", "--reps", "2"],
        &out,
    );
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn thread_env_fallback_does_not_change_output() {
    let dir = scratch("threads");
    let args = [
        "table3", "--grid-m", "24,48", "--grid-a", "0.3,0.9", "--reps", "6", "--seed", "5",
    ];
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    assert_eq!(lrdw(&args, &a).status.code(), Some(0));
    let run = Command::new(env!("CARGO_BIN_EXE_lrdw"))
        .args(args)
        .arg("--out")
        .arg(&b)
        .env("LRDW_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn defaults_follow_experiment() {
    let t3 = parse(&["table3"]);
    assert_eq!(t3.reps, 500);
    assert_eq!(t3.grid_m, vec![250, 500, 1000, 2000]);
    assert!(!t3.header().contains(" m="));

    let t1 = parse(&["table1"]);
    assert_eq!((t1.m, t1.n, t1.a), (833, 500, 0.7));
    assert_eq!(t1.spikes, vec![10.0, 10.0, 6.0, 4.0, 4.0, 4.0]);

    let ps = parse(&["pseudo-spikes", "--n", "1200"]);
    assert_eq!(ps.experiment, Experiment::PseudoSpikes);
    assert_eq!(ps.grid_n, vec![1200]);
    assert!(ps.header().contains("grid_n=1200"));

    let t2 = parse(&["table2", "--gammas", "1.1,1.2,1.3"]);
    assert!(t2.header().contains("gammas=1.1,1.2,1.3"));
    assert!(!t2.header().contains("calibrate_reps"));
}

#[test]
fn companion_paths() {
    let out = Path::new("/tmp/run/result.csv");
    assert_eq!(table_path(out, 0, "main"), out);
    assert_eq!(
        table_path(out, 1, "hist"),
        Path::new("/tmp/run/result.hist.csv")
    );
    assert_eq!(
        table_path(Path::new("plain"), 2, "ratios"),
        Path::new("plain.ratios.csv")
    );
}
