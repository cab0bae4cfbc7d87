use rayon::prelude::*;

use crate::chaos::{Orbit, OrbitParams, Precision};
use crate::prng::battery::{block_frequency_test, monobit_test, runs_test, DEFAULT_ALPHA};
use crate::prng::{bits_from_words, extract_word32, BatteryReport, StreamConfig};
use crate::seed::{sub_rng, DEFAULT_MASTER_SEED};

use super::{require, with_redraws, AnalysisError};

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryConfig {
    pub mu: String,
    pub k: u32,
    pub precision: Precision,
    pub seeds: u64,
    /// Words per seed; 31 250 words make 10^6 bits.
    pub words: usize,
    pub transient: u64,
    pub alpha: f64,
    pub block_len: usize,
    pub master_seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            mu: "4".into(),
            k: 0,
            precision: Precision::default_decimal(),
            seeds: 20,
            words: 31_250,
            transient: StreamConfig::DEFAULT_TRANSIENT,
            alpha: DEFAULT_ALPHA,
            block_len: 128,
            master_seed: DEFAULT_MASTER_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatterySeedRow {
    pub index: u64,
    pub x0: String,
    pub redraws: u32,
    /// Frequency, runs and block frequency, in that order.
    pub reports: Vec<BatteryReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryExperiment {
    pub config: BatteryConfig,
    pub rows: Vec<BatterySeedRow>,
}

impl BatteryExperiment {
    /// Seeds on which the named test passed.
    pub fn passes(&self, test: &str) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.reports)
            .filter(|r| r.test == test && r.passed)
            .count()
    }

    /// `(label, report)` pairs for CSV output.
    pub fn labelled_reports(&self) -> Vec<(String, BatteryReport)> {
        self.rows
            .iter()
            .flat_map(|row| {
                let label = format!("k={} seed={}", self.config.k, row.index);
                row.reports.iter().map(move |r| (label.clone(), r.clone()))
            })
            .collect()
    }
}

/// The three bit tests on one word stream per seed.
pub fn battery_experiment(config: &BatteryConfig) -> Result<BatteryExperiment, AnalysisError> {
    let c = config;
    require(c.seeds > 0 && c.words > 0, || "seeds and words must be positive".into())?;
    let rows = (0..c.seeds)
        .into_par_iter()
        .map(|index| {
            let mut rng = sub_rng(c.master_seed, index);
            let (words, x0, redraws) = with_redraws(&mut rng, index, |x0| {
                let params = OrbitParams::new(&c.mu, x0, c.k, c.precision)?;
                let mut orbit = Orbit::new(&params);
                orbit.discard(c.transient)?;
                (0..c.words)
                    .map(|_| orbit.next_zoomed().map(|y| extract_word32(&y)))
                    .collect::<Result<Vec<u32>, _>>()
            })?;
            let bits = bits_from_words(&words);
            let reports = vec![
                monobit_test(&bits)?.at_alpha(c.alpha),
                runs_test(&bits)?.at_alpha(c.alpha),
                block_frequency_test(&bits, c.block_len)?.at_alpha(c.alpha),
            ];
            Ok(BatterySeedRow {
                index,
                x0,
                redraws,
                reports,
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(BatteryExperiment {
        config: c.clone(),
        rows,
    })
}
