//! Scenario runner: JSON configs in, JSON reports and CSV tables out.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{oracle_check, run, sweep, verify, Written};
pub use config::{load, ScenarioConfig};
pub use error::CliError;
