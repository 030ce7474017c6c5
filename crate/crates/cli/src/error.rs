use std::fmt;
use std::io;

/// Failure of one invocation, mapped onto the process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, values or config entries. Exit status 2.
    Usage(String),
    /// The request is well formed but over a documented size limit. Exit status 3.
    Budget(String),
    /// I/O and cache trouble. Exit status 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Budget(m) => write!(f, "refused: {m}"),
            CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<polarsum::Error> for CliError {
    fn from(e: polarsum::Error) -> Self {
        match e {
            polarsum::Error::Budget(_) => CliError::Budget(e.to_string()),
            polarsum::Error::Cache(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
