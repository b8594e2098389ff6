use std::fmt;

use thiserror::Error;

/// A configuration problem, anchored to a line of the source document when
/// one can be found.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            line: None,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn at(mut self, line: Option<usize>) -> Self {
        self.line = self.line.or(line);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.path.is_empty()) {
            (Some(l), false) => write!(f, "line {l}: {}: {}", self.path, self.message),
            (Some(l), true) => write!(f, "line {l}: {}", self.message),
            (None, false) => write!(f, "{}: {}", self.path, self.message),
            (None, true) => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(ConfigError),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl CliError {
    /// 1 for configuration errors, 2 for invariant failures, 3 for resource limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<copolymer::Error> for CliError {
    fn from(e: copolymer::Error) -> Self {
        use copolymer::Error as E;
        match e {
            E::HorizonExceeded { .. } => CliError::Resource(e.to_string()),
            E::InvalidParameter { name, .. } => CliError::Config(ConfigError::new(name, e.to_string())),
            E::NonIntegerRatio { what, .. } => CliError::Config(ConfigError::new(what, e.to_string())),
            E::Normalization(_) | E::BoundUndefined { .. } => CliError::Config(ConfigError::new("", e.to_string())),
            E::BracketInvalid { .. } | E::Inconsistent(_) | E::Invariant(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Resource(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Resource(format!("csv: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
