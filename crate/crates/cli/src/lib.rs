//! Experiment harness around `layerpot`: published-table checks, distance
//! sweeps, order scans, timings and single evaluations.

pub mod bench;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod sweep;

pub use error::{CliError, CliResult};
