//! Command-line front end: config files, figure presets, sweeps written as
//! CSV, and optimizer reports.

pub mod config;
pub mod error;
pub mod optimize;
pub mod scenario;
pub mod sweep;

pub use config::{load_config, parse_config};
pub use error::{CliError, Result};
pub use optimize::{run_optimize, OptimizeMode, OptimizeReport};
pub use scenario::Scenario;
pub use sweep::{parse_sweep, run_sweep, Engine, Row, SweepResult, SweepSpec};
