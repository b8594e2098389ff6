//! Configuration, experiment pipelines and result persistence for the
//! `copolab` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod suite;

pub use commands::{execute, load_config, run, Outcome, RunOptions, COMMANDS};
pub use config::RunConfig;
pub use error::{CliError, ConfigError};
pub use output::ResultRecord;
