//! CLI errors carry their process exit code: 2 usage, 3 input parse,
//! 4 budget exceeded, 5 verification mismatch.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("verification mismatch: the direct count disagrees with the profile subtraction")]
    VerificationMismatch,
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Budget(_) => 4,
            CliError::VerificationMismatch => 5,
            CliError::Io(_) => 1,
        }
    }

    pub fn io(context: &str, e: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}
