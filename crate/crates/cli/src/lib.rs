//! Command-line front end for `qunit-bell`.
//!
//! Success output goes to standard output as JSON (or CSV for `scan
//! --format csv`); diagnostics go to standard error as a single line.

pub mod commands;
pub mod error;
pub mod state_file;

pub use commands::{run, Cli};
pub use error::CliError;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "QUNIT_BELL_THREADS";
