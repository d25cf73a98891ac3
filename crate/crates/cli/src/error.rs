use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown check `{0}` (run `kaehler-verify list` for the catalog)")]
    UnknownCheck(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] kaehler_core::Error),
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;
