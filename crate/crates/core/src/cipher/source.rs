use std::sync::Arc;

use rand_mt::Mt;
use thiserror::Error;

use crate::chaos::{ChaosError, Orbit, OrbitParams, Precision, RealValue};

use super::{ChainMode, CipherKey};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SourceError {
    #[error(transparent)]
    Orbit(#[from] ChaosError),
    #[error("external file exhausted after {draws} draws")]
    Exhausted { draws: u64 },
}

/// A stream of values in `[0, 1)` driving the cipher loop.
pub trait TrajectorySource {
    fn precision(&self) -> Precision;

    /// The next value `y_t`.
    fn next_value(&mut self) -> Result<RealValue, SourceError>;

    /// Called once per unit with the accepted arrival value.
    fn chain(&mut self, arrival: &RealValue);

    /// A short label for reports.
    fn label(&self) -> String;
}

/// The k-logistic orbit of a key.
#[derive(Debug, Clone)]
pub struct KLogisticSource {
    orbit: Orbit,
    chain: ChainMode,
}

impl KLogisticSource {
    pub fn new(params: &OrbitParams, chain: ChainMode) -> Self {
        KLogisticSource {
            orbit: Orbit::new(params),
            chain,
        }
    }

    pub fn for_key(key: &CipherKey) -> Self {
        KLogisticSource::new(key.params(), key.chain())
    }

    /// Restarts the underlying orbit at `x`.
    pub fn restart(&mut self, x: RealValue) {
        self.orbit.reseed(x);
    }

    pub fn state(&self) -> &RealValue {
        self.orbit.state()
    }
}

impl TrajectorySource for KLogisticSource {
    fn precision(&self) -> Precision {
        self.orbit.state().precision()
    }

    fn next_value(&mut self) -> Result<RealValue, SourceError> {
        Ok(self.orbit.next_zoomed()?)
    }

    fn chain(&mut self, arrival: &RealValue) {
        if self.chain == ChainMode::Zoomed {
            self.orbit.reseed(arrival.clone());
        }
    }

    fn label(&self) -> String {
        format!("k={}", self.orbit.zoom())
    }
}

/// MT19937 words scaled by `2^-32`. Not chaotic; a general-purpose baseline.
#[derive(Debug, Clone)]
pub struct BaselineSource {
    rng: Mt,
    precision: Precision,
}

impl BaselineSource {
    pub fn new(seed: u32, precision: Precision) -> Self {
        BaselineSource {
            rng: Mt::new(seed),
            precision,
        }
    }
}

impl TrajectorySource for BaselineSource {
    fn precision(&self) -> Precision {
        self.precision
    }

    fn next_value(&mut self) -> Result<RealValue, SourceError> {
        Ok(RealValue::from_word32(self.rng.next_u32(), self.precision))
    }

    fn chain(&mut self, _: &RealValue) {}

    fn label(&self) -> String {
        "baseline:mt19937".into()
    }
}

/// Raw bytes consumed four at a time as little-endian words over `2^32`.
#[derive(Debug, Clone)]
pub struct ExternalSource {
    bytes: Arc<[u8]>,
    cursor: usize,
    precision: Precision,
    name: String,
}

impl ExternalSource {
    /// Starts reading `bytes` at `offset` (rounded down to a word).
    pub fn new(bytes: Arc<[u8]>, offset: usize, precision: Precision, name: &str) -> Self {
        ExternalSource {
            bytes,
            cursor: offset / 4 * 4,
            precision,
            name: name.to_string(),
        }
    }

    pub fn draws_left(&self) -> usize {
        (self.bytes.len() - self.cursor.min(self.bytes.len())) / 4
    }

    pub fn position(&self) -> usize {
        self.cursor
    }
}

impl TrajectorySource for ExternalSource {
    fn precision(&self) -> Precision {
        self.precision
    }

    fn next_value(&mut self) -> Result<RealValue, SourceError> {
        let Some(chunk) = self.bytes.get(self.cursor..self.cursor + 4) else {
            return Err(SourceError::Exhausted {
                draws: self.cursor as u64 / 4,
            });
        };
        self.cursor += 4;
        let word = u32::from_le_bytes(chunk.try_into().expect("4 bytes"));
        Ok(RealValue::from_word32(word, self.precision))
    }

    fn chain(&mut self, _: &RealValue) {}

    fn label(&self) -> String {
        format!("external:{}", self.name)
    }
}
