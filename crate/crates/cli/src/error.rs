use std::path::Path;
use std::process::ExitCode;

use kzoom::analysis::AnalysisError;
use kzoom::cipher::CipherError;
use kzoom::prng::StreamError;
use kzoom::ChaosError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad key, flag value or unreadable input.
    #[error("{0}")]
    Config(String),
    /// The orbit degenerated or a return time ran past `N_max`.
    #[error("{0}")]
    Generation(String),
    #[error("{0}")]
    Ciphertext(String),
    #[error("{0}")]
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Generation(_) => 3,
            CliError::Ciphertext(_) => 4,
            CliError::Assertion(_) => 5,
        })
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Config(format!("{}: {err}", path.display()))
    }
}

impl From<CipherError> for CliError {
    fn from(e: CipherError) -> Self {
        let msg = e.to_string();
        match e {
            CipherError::ReturnExhausted { .. } | CipherError::Source { .. } => {
                CliError::Generation(msg)
            }
            CipherError::InvalidCiphertext { .. } | CipherError::Format(_) => {
                CliError::Ciphertext(msg)
            }
            _ => CliError::Config(msg),
        }
    }
}

impl From<ChaosError> for CliError {
    fn from(e: ChaosError) -> Self {
        match e {
            ChaosError::DegenerateOrbit { .. } | ChaosError::ZoomExhausted { .. } => {
                CliError::Generation(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<StreamError> for CliError {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::EmptyStream => CliError::Config(e.to_string()),
            StreamError::Sink { .. } => CliError::Config(e.to_string()),
            _ => CliError::Generation(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Cipher(c) => c.into(),
            AnalysisError::Chaos(c) => c.into(),
            AnalysisError::Stream(s) => s.into(),
            AnalysisError::DegenerateSeed { .. }
            | AnalysisError::InsufficientReturns { .. }
            | AnalysisError::ExternalFileExhausted { .. } => CliError::Generation(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
