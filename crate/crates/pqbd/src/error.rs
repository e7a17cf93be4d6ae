use std::io;

/// Failure of a CLI run, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Numerical(_) => 2,
            RunError::Io(_) => 1,
        }
    }
}

impl From<pqbd_core::Error> for RunError {
    fn from(e: pqbd_core::Error) -> Self {
        use pqbd_core::Error as E;
        match e {
            E::InvalidParams(_) | E::InvalidGrid(_) | E::Domain(_) => {
                RunError::Config(e.to_string())
            }
            E::NonConvergence { .. } | E::GrowthViolation { .. } => {
                RunError::Numerical(e.to_string())
            }
        }
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Io(io::Error::other(e))
    }
}

pub type RunResult<T> = Result<T, RunError>;
