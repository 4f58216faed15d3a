use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Config = 1,
    Spectral = 2,
    Validation = 3,
    Accuracy = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Serialize(String),

    #[error(transparent)]
    Numerics(#[from] flatland::Error),

    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        use flatland::Error as E;
        match self {
            Self::Usage(_) | Self::Config(_) | Self::Read { .. } | Self::Parse { .. } => ExitStatus::Config,
            Self::Write { .. } | Self::Serialize(_) => ExitStatus::Config,
            Self::Validation(_) => ExitStatus::Validation,
            Self::Numerics(e) => match e {
                E::InvalidMedium(_)
                | E::Domain { .. }
                | E::Config(_)
                | E::SingularPoint
                | E::UnsupportedDirection { .. } => ExitStatus::Config,
                E::CountMismatch { .. } | E::BoundaryZero { .. } | E::NotInSpectrum(_) => {
                    ExitStatus::Spectral
                }
                E::Accuracy { .. } | E::Conditioning(_) => ExitStatus::Accuracy,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
