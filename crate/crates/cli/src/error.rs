use thiserror::Error;

/// Failure of one run, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing parameter; the message names it.
    #[error("{0}")]
    Param(String),

    #[error("{0}")]
    Solver(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn param(name: &str, detail: impl std::fmt::Display) -> Self {
        CliError::Param(format!("parameter {name}: {detail}"))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<fhl_core::Error> for CliError {
    fn from(e: fhl_core::Error) -> Self {
        use fhl_core::Error as E;
        match e {
            E::Domain { .. } | E::Config(_) | E::Pole { .. } | E::Singular => CliError::Param(e.to_string()),
            E::Overflow { .. }
            | E::QuadratureNonConvergence { .. }
            | E::IterationNonConvergence { .. }
            | E::Indefinite { .. }
            | E::Residual { .. }
            | E::Negativity { .. } => CliError::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
