use thiserror::Error;

/// Process exit statuses. Nothing else is ever returned.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const ASSUMPTION: i32 = 2;
    pub const OUT_OF_REGIME: i32 = 3;
    pub const VERIFICATION: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] sdpfeas_core::Error),

    /// A bound and its oracle disagree on the event; a bug, not a finding.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use sdpfeas_core::Error as E;
        match self {
            CliError::Core(E::AssumptionViolation(_)) => exit::ASSUMPTION,
            CliError::Core(E::OutOfRegime(_)) => exit::OUT_OF_REGIME,
            _ => exit::USAGE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
