//! Config-driven batch experiments with CSV results.

pub mod config;
pub mod runner;

pub use config::{parse_config, ExperimentConfig, ExperimentSpec, ModelSpec};
pub use runner::{experiment_seed, run, run_to_csv, write_csv, ResultRow, COLUMNS};
