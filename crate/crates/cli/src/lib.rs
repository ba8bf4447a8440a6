//! Scenario files in, trajectory CSVs and JSON reports out.
//!
//! The `itqsl` binary is a thin layer over [`config`], [`run`] and
//! [`sweep`]; everything it does is available here for embedding and tests.

pub mod config;
pub mod error;
pub mod run;
pub mod sweep;

pub use config::{parse_config, parse_config_str, RawConfig, Scenario, ScenarioConfig};
pub use error::{exit, CliError, CliResult};
pub use run::{evaluate, run, Evaluation, RunOptions, RunReport};
pub use sweep::{run_sweep, sweep, SweepRow};
