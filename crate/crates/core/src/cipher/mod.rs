//! The ergodic cipher: each plaintext symbol becomes the number of steps a
//! trajectory needs to enter the symbol's cell of a partition of `[x_min,
//! x_max)`.

mod ciphertext;
mod engine;
mod key;
mod partition;
mod source;

pub use ciphertext::{Ciphertext, CiphertextFormat};
pub use engine::{decrypt, decrypt_unit, encrypt, DecryptSession, EncryptSession};
pub use key::{keygen, ChainMode, CipherKey, KeyFields, KeyOverrides};
pub use partition::Partition;
pub use source::{BaselineSource, ExternalSource, KLogisticSource, SourceError, TrajectorySource};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CipherError {
    #[error("invalid key: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("site {site} is outside 1..={sites}")]
    IndexOutOfRange { site: u32, sites: u32 },
    #[error("unit {unit}: symbol {symbol} has no site (S = {sites})")]
    SymbolOutOfRange { unit: usize, symbol: u8, sites: u32 },
    #[error("unit {unit}: no accepted return within {n_max} iterations")]
    ReturnExhausted { unit: usize, n_max: u32 },
    #[error("unit {unit}: {reason}")]
    InvalidCiphertext { unit: usize, reason: String },
    #[error("unit {unit}: {source}")]
    Source {
        unit: usize,
        #[source]
        source: SourceError,
    },
    #[error("malformed ciphertext: {0}")]
    Format(String),
}

impl CipherError {
    /// The plaintext or ciphertext unit the error refers to, if any.
    pub fn unit(&self) -> Option<usize> {
        match self {
            CipherError::SymbolOutOfRange { unit, .. }
            | CipherError::ReturnExhausted { unit, .. }
            | CipherError::InvalidCiphertext { unit, .. }
            | CipherError::Source { unit, .. } => Some(*unit),
            _ => None,
        }
    }
}
