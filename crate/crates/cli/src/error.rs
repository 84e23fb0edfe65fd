use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] fateq_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0} check(s) did not pass")]
    VerificationFailed(usize),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 usage or domain error, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
