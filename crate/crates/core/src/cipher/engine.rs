use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chaos::RealValue;

use super::{Ciphertext, CipherError, CipherKey, KLogisticSource, TrajectorySource};

/// Chained encryption of one message.
///
/// The auxiliary generator decides which qualifying return is kept when
/// `η > 0`; with `η = 0` it is never consulted.
#[derive(Debug)]
pub struct EncryptSession<'k, S = KLogisticSource> {
    key: &'k CipherKey,
    source: S,
    aux: ChaCha8Rng,
    unit: usize,
}

impl<'k> EncryptSession<'k, KLogisticSource> {
    pub fn new(key: &'k CipherKey, aux_seed: u64) -> Self {
        EncryptSession::with_source(key, KLogisticSource::for_key(key), aux_seed)
    }
}

impl<'k, S: TrajectorySource> EncryptSession<'k, S> {
    pub fn with_source(key: &'k CipherKey, source: S, aux_seed: u64) -> Self {
        assert_eq!(source.precision(), key.precision(), "source and key precision differ");
        EncryptSession {
            key,
            source,
            aux: ChaCha8Rng::seed_from_u64(aux_seed),
            unit: 0,
        }
    }

    /// Units encrypted so far.
    pub fn units(&self) -> usize {
        self.unit
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn into_source(self) -> S {
        self.source
    }

    /// Encrypts one symbol, returning the step count and the arrival value.
    ///
    /// After an error the session's chain state is unspecified.
    pub fn encrypt_unit(&mut self, symbol: u8) -> Result<(u32, RealValue), CipherError> {
        let key = self.key;
        let unit = self.unit;
        let target = key.site_for(symbol).ok_or(CipherError::SymbolOutOfRange {
            unit,
            symbol,
            sites: key.sites(),
        })?;
        let partition = key.partition();
        let eta = key.eta();
        for t in 1..=key.n_max() {
            let y = self
                .source
                .next_value()
                .map_err(|source| CipherError::Source { unit, source })?;
            if t <= key.n0() || partition.site_of(&y) != Some(target) {
                continue;
            }
            if eta == 0.0 || self.aux.random::<f64>() >= eta {
                self.source.chain(&y);
                self.unit += 1;
                return Ok((t, y));
            }
        }
        Err(CipherError::ReturnExhausted {
            unit,
            n_max: key.n_max(),
        })
    }

    pub fn encrypt(&mut self, plaintext: &[u8]) -> Result<Ciphertext, CipherError> {
        let mut counts = Vec::with_capacity(plaintext.len());
        for &symbol in plaintext {
            counts.push(self.encrypt_unit(symbol)?.0);
        }
        Ok(Ciphertext::new(counts))
    }
}

/// Encrypts `plaintext` from the key's `x0`. Deterministic in `(key, aux_seed)`.
pub fn encrypt(plaintext: &[u8], key: &CipherKey, aux_seed: u64) -> Result<Ciphertext, CipherError> {
    EncryptSession::new(key, aux_seed).encrypt(plaintext)
}

/// Chained decryption by replaying the trajectory.
#[derive(Debug)]
pub struct DecryptSession<'k, S = KLogisticSource> {
    key: &'k CipherKey,
    source: S,
    unit: usize,
}

impl<'k> DecryptSession<'k, KLogisticSource> {
    pub fn new(key: &'k CipherKey) -> Self {
        DecryptSession::with_source(key, KLogisticSource::for_key(key))
    }
}

impl<'k, S: TrajectorySource> DecryptSession<'k, S> {
    pub fn with_source(key: &'k CipherKey, source: S) -> Self {
        DecryptSession {
            key,
            source,
            unit: 0,
        }
    }

    pub fn decrypt_unit(&mut self, count: u32) -> Result<(u8, RealValue), CipherError> {
        let key = self.key;
        let unit = self.unit;
        if count <= key.n0() || count > key.n_max() {
            return Err(CipherError::InvalidCiphertext {
                unit,
                reason: format!(
                    "count {count} is outside ({}, {}]",
                    key.n0(),
                    key.n_max()
                ),
            });
        }
        let mut y = None;
        for _ in 0..count {
            y = Some(
                self.source
                    .next_value()
                    .map_err(|source| CipherError::Source { unit, source })?,
            );
        }
        let y = y.expect("count >= 1");
        let site = key.partition().site_of(&y).ok_or_else(|| CipherError::InvalidCiphertext {
            unit,
            reason: format!("arrival {y} after {count} steps lies in no site"),
        })?;
        let symbol = key.symbol_for(site).ok_or_else(|| CipherError::InvalidCiphertext {
            unit,
            reason: format!("site {site} carries no symbol"),
        })?;
        self.source.chain(&y);
        self.unit += 1;
        Ok((symbol, y))
    }

    pub fn decrypt(&mut self, ciphertext: &Ciphertext) -> Result<Vec<u8>, CipherError> {
        ciphertext
            .counts()
            .iter()
            .map(|&c| self.decrypt_unit(c).map(|(s, _)| s))
            .collect()
    }
}

/// One unit from an explicit chain state `x`.
pub fn decrypt_unit(x: &RealValue, count: u32, key: &CipherKey) -> Result<(u8, RealValue), CipherError> {
    let mut source = KLogisticSource::for_key(key);
    source.restart(x.clone());
    DecryptSession::with_source(key, source).decrypt_unit(count)
}

/// Inverse of [`encrypt`] for any `aux_seed` and `η`.
pub fn decrypt(ciphertext: &Ciphertext, key: &CipherKey) -> Result<Vec<u8>, CipherError> {
    DecryptSession::new(key).decrypt(ciphertext)
}
