use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot parse input: {0}")]
    Parse(String),

    #[error("I/O failure on {path}: {message}")]
    IoFailure { path: String, message: String },

    #[error(transparent)]
    Core(#[from] conic_zariski::Error),

    #[error("{failed} check(s) failed")]
    ChecksFailed { failed: usize },
}

impl CliError {
    /// 1: a verification check failed; 2: bad arguments or input; 3: the
    /// computation failed; 4: I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Core(_) => 3,
            CliError::IoFailure { .. } => 4,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::IoFailure {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}
