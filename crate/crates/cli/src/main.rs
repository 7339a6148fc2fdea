use std::process::ExitCode;

use clap::Parser;
use lrdw_cli::config::{Cli, ExperimentConfig};
use lrdw_cli::experiments;
use lrdw_cli::output::write_tables;

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let cfg = match ExperimentConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("lrdw: invalid configuration: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let tables = match experiments::run(&cfg) {
        Ok(t) => t,
        Err(e) if e.is_numerical() => {
            eprintln!("lrdw: numerical failure: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
        Err(e) => {
            eprintln!("lrdw: invalid configuration: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match write_tables(&cfg.out, &cfg.header(), &tables) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lrdw: cannot write {}: {e}", cfg.out.display());
            ExitCode::from(EXIT_IO)
        }
    }
}
