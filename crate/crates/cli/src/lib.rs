//! Configuration, orchestration and output for polaron decoherence experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiment;
pub mod svg;

pub use config::{parse_config, ConfigError, ExperimentConfig, Location, Mode};
pub use error::CliError;
pub use experiment::{num, run_experiment, RunReport};
