//! Command-line front end: argument and config parsing, CSV output and
//! gnuplot scripts for the standard sweeps.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;

pub use config::{CommandKind, FileConfig, RunConfig, SweepPlan};
pub use error::CliError;
