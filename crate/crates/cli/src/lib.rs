//! Command-line harness: field input, reports, property checks and the
//! quadratic sweep, on top of `perfect-unary-core`.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod fieldfile;
pub mod report;
pub mod sweep;

pub use commands::run;
pub use config::RunConfig;
pub use error::CliError;
