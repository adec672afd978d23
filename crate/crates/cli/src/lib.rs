//! Scenario runner: named parameter sets, flat config files, CSV and
//! gnuplot output, oracle cross-checks and parameter sweeps.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod oracle;
pub mod output;
pub mod run;
pub mod scenario;
pub mod sweep;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use oracle::{run_oracle_suite, OracleReport};
pub use run::{run_scenario, RunOutput};
pub use scenario::{plan, Case, ScenarioName, ScenarioPlan};
pub use sweep::{run_sweep, sweep_csv, SweepRow, SweepSpec};
