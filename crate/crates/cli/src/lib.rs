//! Experiment runners and CSV output behind the `lrdw` binary.

pub mod config;
pub mod experiments;
pub mod output;
