use std::fmt;

use ias_core::IasError;

/// Exit code 0: success.
pub const EXIT_OK: i32 = 0;
/// Exit code 1: bad usage, unreadable input, malformed literal, I/O failure.
pub const EXIT_USAGE: i32 = 1;
/// Exit code 2: the mathematics failed a check or a construction.
pub const EXIT_MATH: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Io(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Math(_) => EXIT_MATH,
        }
    }

    pub fn from_parse(e: IasError) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn from_parse_in(field: &str, e: IasError) -> Self {
        CliError::Usage(format!("{field}: {e}"))
    }

    pub fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Math(m) => write!(f, "validation failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<IasError> for CliError {
    fn from(e: IasError) -> Self {
        match e {
            IasError::Parse { .. } | IasError::InvalidParameter(_) | IasError::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Math(other.to_string()),
        }
    }
}
