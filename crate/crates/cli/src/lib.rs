//! Batch front end for the `centralspin` library: time series, parameter
//! sweeps, width reports and self-validation, all emitting CSV or plain text.

pub mod app;
pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod validate;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
