use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("numerical error: {0}")]
    Numeric(#[from] siegel_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownSuite(_) | CliError::ConfigInvalid(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}
