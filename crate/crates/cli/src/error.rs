use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] rehypo_core::Error),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 config error, 3 infeasible hoarding, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(rehypo_core::Error::InfeasibleHoarding { .. }) => 3,
            CliError::Model(e) if e.is_numerical() => 4,
            // remaining model errors are rejected inputs
            CliError::Model(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}
