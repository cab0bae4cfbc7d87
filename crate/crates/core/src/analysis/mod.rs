//! Experiments over many seeds: value distributions, bifurcation densities,
//! return maps, recurrence times, ciphertext lengths and the bit battery.
//!
//! Every experiment takes a master seed. Work is spread over rayon's pool
//! one seed (or run) per task and merged in index order, so a run on one
//! thread and a run on many produce the same result.

mod battery;
mod bifurcation;
mod cipherdist;
mod export;
mod histogram;
mod kac;
mod retmap;

pub use battery::{battery_experiment, BatteryConfig, BatteryExperiment, BatterySeedRow};
pub use bifurcation::{bifurcation_grid, BifurcationConfig, BifurcationGrid};
pub use cipherdist::{
    cipher_distribution_experiment, CipherDistConfig, CipherDistResult, SourceSpec,
};
pub use export::{export_csv, CsvExport};
pub use histogram::{
    arcsine_bin_agreement, chi_square_uniform, histogram_experiment, ks_against_arcsine,
    orbit_samples, ChiSquare, HistogramConfig, HistogramResult, KsResult, SeedHistogram,
    DEFAULT_KS_TOLERANCE,
};
pub use kac::{kac_report, KacConfig, KacReport};
pub use retmap::{lag_autocorrelation, return_map_data, ReturnMapConfig, ReturnMapData};

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chaos::ChaosError;
use crate::cipher::CipherError;
use crate::prng::{BatteryError, StreamError};
use crate::seed::unit_literal;

/// Redraws allowed per seed when a starting point degenerates.
pub const MAX_REDRAWS: u32 = 10;
/// Fractional digits of a drawn starting point.
const SEED_DIGITS: usize = 20;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Chaos(#[from] ChaosError),
    #[error("seed {index} degenerated on {attempts} starting points (last: {last})")]
    DegenerateSeed {
        index: u64,
        attempts: u32,
        last: ChaosError,
    },
    #[error("expected count {expected} per bin is below 5")]
    ExpectedTooSmall { expected: f64 },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("only {observed} returns within {steps} steps, need {needed}")]
    InsufficientReturns {
        observed: u64,
        needed: u64,
        steps: u64,
    },
    #[error("{label} ran out of data after {draws} draws")]
    ExternalFileExhausted { label: String, draws: u64 },
    #[error(transparent)]
    Cipher(#[from] CipherError),
    #[error(transparent)]
    Battery(#[from] BatteryError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Runs `f` from freshly drawn starting points until one does not degenerate.
///
/// Returns the value, the starting point used and the number of redraws.
pub(crate) fn with_redraws<T>(
    rng: &mut ChaCha8Rng,
    index: u64,
    mut f: impl FnMut(&str) -> Result<T, ChaosError>,
) -> Result<(T, String, u32), AnalysisError> {
    let mut last = None;
    for attempt in 0..=MAX_REDRAWS {
        let x0 = unit_literal(rng, SEED_DIGITS);
        match f(&x0) {
            Ok(v) => return Ok((v, x0, attempt)),
            Err(e @ (ChaosError::DegenerateOrbit { .. } | ChaosError::ZoomExhausted { .. })) => {
                last = Some(e)
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(AnalysisError::DegenerateSeed {
        index,
        attempts: MAX_REDRAWS + 1,
        last: last.expect("at least one attempt"),
    })
}

pub(crate) fn require(ok: bool, message: impl FnOnce() -> String) -> Result<(), AnalysisError> {
    if ok {
        Ok(())
    } else {
        Err(AnalysisError::InvalidInput(message()))
    }
}
