use std::fmt;

/// Failures, each tied to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed field files, invalid fields.
    Input(String),
    /// A computation failed for a reason other than bad input.
    Compute(perfect_unary_core::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Compute(e) => write!(f, "computation failed: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<perfect_unary_core::Error> for CliError {
    fn from(e: perfect_unary_core::Error) -> Self {
        CliError::Compute(e)
    }
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;
