//! Scenario runner for the squeezing-dynamics library: configuration and
//! presets, single runs, parameter sweeps, and the CSV/JSON artifacts they
//! write.

pub mod config;
pub mod error;
pub mod output;
pub mod scenario;

pub use config::{Baseline, Mode, OutputKind, ScenarioConfig, PRESETS};
pub use error::{ConfigError, RunError};
pub use scenario::{compute, run, sweep, RunSummary, SweepAxis, SweepOptions, SweepRow};
