//! Command-line front end: deterministic run reports for the verification
//! suites of `stiefel-core`.

pub mod commands;
pub mod config;
pub mod report;

pub use config::Config;
pub use report::{Check, Metric, RunReport, VERSION};
