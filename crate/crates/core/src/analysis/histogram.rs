use rayon::prelude::*;

use crate::chaos::{arcsine_cdf, arcsine_measure, ChaosError, Orbit, OrbitParams, Precision};
use crate::seed::{sub_rng, DEFAULT_MASTER_SEED};
use crate::stats::chi_square_sf;

use super::{require, with_redraws, AnalysisError};

/// KS distance accepted against the arcsine law at `n = 10^5`. Loose on
/// purpose: orbit samples are serially correlated.
pub const DEFAULT_KS_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramConfig {
    pub mu: String,
    pub k: u32,
    pub precision: Precision,
    pub seeds: u64,
    pub samples: usize,
    pub bins: u32,
    pub transient: u64,
    pub master_seed: u64,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        HistogramConfig {
            mu: "4".into(),
            k: 0,
            precision: Precision::default_decimal(),
            seeds: 100,
            samples: 10_000,
            bins: 500,
            transient: 1000,
            master_seed: DEFAULT_MASTER_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedHistogram {
    pub index: u64,
    pub x0: String,
    /// Starting points discarded because their orbit degenerated.
    pub redraws: u32,
    pub counts: Vec<u64>,
}

/// Per-bin counts of `y_t` over `[0, 1)` for many starting points.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramResult {
    pub config: HistogramConfig,
    pub per_seed: Vec<SeedHistogram>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl HistogramResult {
    /// `bins + 1` equally spaced edges from 0 to 1.
    pub fn edges(&self) -> Vec<f64> {
        let b = self.config.bins;
        (0..=b).map(|i| i as f64 / b as f64).collect()
    }

    pub fn chi_square_per_seed(&self) -> Result<Vec<ChiSquare>, AnalysisError> {
        self.per_seed.iter().map(|s| chi_square_uniform(&s.counts)).collect()
    }
}

pub fn histogram_experiment(config: &HistogramConfig) -> Result<HistogramResult, AnalysisError> {
    require(config.seeds > 0 && config.samples > 0, || {
        "seeds and samples must be positive".into()
    })?;
    require(config.bins > 0, || "bins must be positive".into())?;
    let bins = config.bins as usize;
    let per_seed = (0..config.seeds)
        .into_par_iter()
        .map(|index| {
            let mut rng = sub_rng(config.master_seed, index);
            let (counts, x0, redraws) = with_redraws(&mut rng, index, |x0| {
                let params = OrbitParams::new(&config.mu, x0, config.k, config.precision)?;
                let mut orbit = Orbit::new(&params);
                orbit.discard(config.transient)?;
                let mut counts = vec![0u64; bins];
                for _ in 0..config.samples {
                    let y = orbit.next_zoomed()?;
                    counts[y.floor_scaled(bins as u64) as usize] += 1;
                }
                Ok(counts)
            })?;
            Ok(SeedHistogram {
                index,
                x0,
                redraws,
                counts,
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;

    let n = per_seed.len() as f64;
    let mut mean = vec![0.0; bins];
    let mut std = vec![0.0; bins];
    for b in 0..bins {
        let m = per_seed.iter().map(|s| s.counts[b] as f64).sum::<f64>() / n;
        let var = if per_seed.len() > 1 {
            per_seed
                .iter()
                .map(|s| (s.counts[b] as f64 - m).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        } else {
            0.0
        };
        mean[b] = m;
        std[b] = var.sqrt();
    }
    Ok(HistogramResult {
        config: config.clone(),
        per_seed,
        mean,
        std,
    })
}

/// `n` zoomed values as doubles after `transient` steps.
pub fn orbit_samples(
    params: &OrbitParams,
    n: usize,
    transient: u64,
) -> Result<Vec<f64>, ChaosError> {
    let mut orbit = Orbit::new(params);
    orbit.discard(transient)?;
    (0..n).map(|_| orbit.next_zoomed().map(|y| y.to_f64())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
}

/// Pearson's statistic against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare, AnalysisError> {
    require(!counts.is_empty(), || "no bins".into())?;
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    if expected < 5.0 {
        return Err(AnalysisError::ExpectedTooSmall { expected });
    }
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>();
    let dof = counts.len() as u32 - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        chi_square_sf(statistic, dof as f64)
    };
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub n: usize,
    pub distance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Kolmogorov–Smirnov distance between the samples' empirical CDF and
/// `F(x) = (2/π)·asin(√x)`.
pub fn ks_against_arcsine(samples: &[f64]) -> Result<KsResult, AnalysisError> {
    require(!samples.is_empty(), || "no samples".into())?;
    if let Some(bad) = samples.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(ChaosError::Domain(format!("sample {bad} is outside ]0, 1[")).into());
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let distance = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = arcsine_cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    Ok(KsResult {
        n: sorted.len(),
        distance,
        tolerance: DEFAULT_KS_TOLERANCE,
        passed: distance < DEFAULT_KS_TOLERANCE,
    })
}

/// Fraction of equal-width bins whose frequency lies within three binomial
/// standard errors of the bin's arcsine measure.
pub fn arcsine_bin_agreement(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let n = total as f64;
    let b = counts.len() as f64;
    let ok = counts
        .iter()
        .enumerate()
        .filter(|(i, &c)| {
            let p = arcsine_measure(*i as f64 / b, (*i + 1) as f64 / b).expect("bin in [0, 1]");
            let se = (p * (1.0 - p) / n).sqrt();
            (c as f64 / n - p).abs() <= 3.0 * se
        })
        .count();
    ok as f64 / b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn small(k: u32, bins: u32) -> HistogramConfig {
        HistogramConfig {
            k,
            bins,
            seeds: 4,
            precision: Precision::Binary64,
            ..Default::default()
        }
    }

    #[test]
    fn counts_are_conserved() {
        let r = histogram_experiment(&small(2, 37)).unwrap();
        for s in &r.per_seed {
            assert_eq!(s.counts.iter().sum::<u64>(), 10_000);
        }
        assert_eq!(r.edges().len(), 38);
        assert_eq!(r.edges()[37], 1.0);
    }

    #[test]
    fn one_bin_holds_everything() {
        let r = histogram_experiment(&small(0, 1)).unwrap();
        assert_eq!(r.mean, vec![10_000.0]);
        assert_eq!(r.std, vec![0.0]);
    }

    #[test]
    fn k0_is_u_shaped_and_k3_is_flat() {
        let r = histogram_experiment(&small(0, 500)).unwrap();
        let centre = (r.mean[249] + r.mean[250]) / 2.0;
        assert!(r.mean[0] > 5.0 * centre && r.mean[499] > 5.0 * centre, "{centre}");

        let mut cfg = small(3, 100);
        cfg.precision = Precision::Decimal(64);
        let r = histogram_experiment(&cfg).unwrap();
        for chi in r.chi_square_per_seed().unwrap() {
            assert!(chi.p_value >= 0.001, "{chi:?}");
        }
        let k0 = histogram_experiment(&small(0, 100)).unwrap();
        for chi in k0.chi_square_per_seed().unwrap() {
            assert!(chi.p_value < 1e-10);
        }
    }

    #[test]
    fn experiments_replay() {
        let a = histogram_experiment(&small(1, 20)).unwrap();
        let b = histogram_experiment(&small(1, 20)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chi_square_edge_cases() {
        let c = chi_square_uniform(&[10, 10, 10, 10]).unwrap();
        assert_eq!((c.statistic, c.p_value, c.dof), (0.0, 1.0, 3));
        assert!(matches!(
            chi_square_uniform(&[1, 2, 3]),
            Err(AnalysisError::ExpectedTooSmall { .. })
        ));
        // 2 dof: p = exp(-x/2).
        let c = chi_square_uniform(&[20, 10, 0]).unwrap();
        assert!((c.p_value - (-c.statistic / 2.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn ks_on_exact_arcsine_samples() {
        let mut rng = sub_rng(3, 0);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| {
                let u: f64 = rng.random();
                (std::f64::consts::FRAC_PI_2 * u).sin().powi(2)
            })
            .filter(|&x| x > 0.0 && x < 1.0)
            .collect();
        let r = ks_against_arcsine(&xs).unwrap();
        assert!(r.distance < 0.005, "{r:?}");
        assert!(ks_against_arcsine(&[]).is_err());
        assert!(matches!(ks_against_arcsine(&[0.5, 1.0]), Err(AnalysisError::Chaos(_))));
    }

    #[test]
    fn k0_orbit_follows_arcsine() {
        let params = OrbitParams::new("4", "0.2718281828", 0, Precision::Binary64).unwrap();
        let xs = orbit_samples(&params, 100_000, 1000).unwrap();
        let r = ks_against_arcsine(&xs).unwrap();
        assert!(r.passed, "{r:?}");
        let mut counts = vec![0u64; 100];
        for x in xs {
            counts[(x * 100.0) as usize] += 1;
        }
        assert!(arcsine_bin_agreement(&counts) >= 0.95);
    }
}
