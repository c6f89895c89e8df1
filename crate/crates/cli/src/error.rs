use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] keycrit::Error),
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("bad parameters: {0}")]
    Params(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Params(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
