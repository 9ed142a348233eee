use thiserror::Error;

/// Exit codes, also listed in `--help`.
pub const EXIT_ARGS: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Args(String),
    #[error(transparent)]
    Numerical(#[from] tritronquee::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(_) => EXIT_ARGS,
            // Rejected quantum numbers are bad input, not a numerical failure.
            CliError::Numerical(tritronquee::Error::InvalidQuantumNumbers { .. } | tritronquee::Error::NotPrimitive { .. }) => {
                EXIT_ARGS
            }
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    /// Name printed on stderr ahead of the message.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Args(_) => "InvalidArguments",
            CliError::Numerical(e) => e.name(),
            CliError::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
