use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::cipher::{
    BaselineSource, CipherError, CipherKey, EncryptSession, ExternalSource, KLogisticSource,
    KeyFields, SourceError, TrajectorySource,
};
use crate::seed::{sub_rng, unit_literal, DEFAULT_MASTER_SEED};

use super::{require, AnalysisError};

/// What drives the cipher loop in one arm of the experiment.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    /// The key's own k-logistic orbit with zoom depth `k`.
    KLogistic { k: u32 },
    /// MT19937, seeded per run.
    Baseline,
    /// Bytes from a file, consumed in order across runs.
    External { name: String, bytes: Arc<[u8]> },
}

impl SourceSpec {
    pub fn label(&self) -> String {
        match self {
            SourceSpec::KLogistic { k } => format!("k={k}"),
            SourceSpec::Baseline => "baseline:mt19937".into(),
            SourceSpec::External { name, .. } => format!("external:{name}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CipherDistConfig {
    /// Key fields shared by every run; `x0` and `k` are replaced per run.
    pub template: KeyFields,
    pub sources: Vec<SourceSpec>,
    pub plaintexts: u64,
    pub letters: usize,
    pub bins: u32,
    pub master_seed: u64,
}

impl CipherDistConfig {
    pub fn new(template: KeyFields, sources: Vec<SourceSpec>) -> Self {
        CipherDistConfig {
            template,
            sources,
            plaintexts: 100,
            letters: 10_000,
            bins: 50,
            master_seed: DEFAULT_MASTER_SEED,
        }
    }
}

/// Ciphertext lengths for one source.
#[derive(Debug, Clone, PartialEq)]
pub struct CipherDistResult {
    pub label: String,
    pub n0: u32,
    pub n_max: u32,
    /// `bins + 1` logarithmically spaced edges from `N0 + 1` to `N_max`.
    pub edges: Vec<f64>,
    /// Counts of every emitted `C_n`, pooled over runs.
    pub histogram: Vec<u64>,
    /// Sum of the counts of each run; `None` for runs that hit `N_max`.
    pub totals: Vec<Option<u64>>,
}

impl CipherDistResult {
    pub fn exhausted_runs(&self) -> usize {
        self.totals.iter().filter(|t| t.is_none()).count()
    }

    pub fn mean_total(&self) -> Option<f64> {
        let done: Vec<u64> = self.totals.iter().flatten().copied().collect();
        (!done.is_empty()).then(|| done.iter().sum::<u64>() as f64 / done.len() as f64)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n: u64 = self.histogram.iter().sum();
        self.histogram
            .iter()
            .map(|&c| if n == 0 { 0.0 } else { c as f64 / n as f64 })
            .collect()
    }

    /// L1 distance between normalized histograms on the same bins.
    pub fn l1_distance(&self, other: &CipherDistResult) -> f64 {
        assert_eq!(self.edges, other.edges, "histograms use different bins");
        self.frequencies()
            .iter()
            .zip(other.frequencies())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

fn log_edges(lo: f64, hi: f64, bins: u32) -> Vec<f64> {
    let span = (hi / lo).ln();
    (0..=bins)
        .map(|i| {
            if i == bins {
                hi
            } else {
                lo * (span * i as f64 / bins as f64).exp()
            }
        })
        .collect()
}

fn log_bin(count: u32, lo: f64, hi: f64, bins: u32) -> usize {
    if hi <= lo {
        return 0;
    }
    let pos = (count as f64 / lo).ln() / (hi / lo).ln() * bins as f64;
    (pos.max(0.0) as usize).min(bins as usize - 1)
}

/// The plaintext, starting point and seeds of run `r`; identical for every
/// source so runs can be compared pairwise.
struct RunInput {
    x0: String,
    letters: Vec<u8>,
    baseline_seed: u32,
    aux_seed: u64,
}

fn run_input(cfg: &CipherDistConfig, run: u64) -> RunInput {
    let mut rng = sub_rng(cfg.master_seed, run);
    let x0 = unit_literal(&mut rng, 20);
    let sites = cfg.template.sites;
    let letters = (0..cfg.letters)
        .map(|_| rng.random_range(0..sites) as u8)
        .collect();
    RunInput {
        x0,
        letters,
        baseline_seed: rng.random(),
        aux_seed: rng.random(),
    }
}

enum RunOutcome {
    Done(Vec<u32>),
    Exhausted,
}

fn encrypt_run<S: TrajectorySource>(
    key: &CipherKey,
    source: S,
    input: &RunInput,
) -> Result<(RunOutcome, S), AnalysisError> {
    let mut session = EncryptSession::with_source(key, source, input.aux_seed);
    let mut counts = Vec::with_capacity(input.letters.len());
    for &letter in &input.letters {
        match session.encrypt_unit(letter) {
            Ok((c, _)) => counts.push(c),
            Err(CipherError::ReturnExhausted { .. }) => {
                return Ok((RunOutcome::Exhausted, session.into_source()))
            }
            Err(CipherError::Source {
                source: SourceError::Exhausted { draws },
                ..
            }) => {
                return Err(AnalysisError::ExternalFileExhausted {
                    label: session.source().label(),
                    draws,
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((RunOutcome::Done(counts), session.into_source()))
}

pub fn cipher_distribution_experiment(
    config: &CipherDistConfig,
) -> Result<Vec<CipherDistResult>, AnalysisError> {
    let c = config;
    require(c.bins > 0, || "bins must be positive".into())?;
    require(!c.sources.is_empty(), || "no sources".into())?;
    // Validate the template once; per-run keys only change x0 and k.
    let base = CipherKey::new(c.template.clone())?;
    let inputs: Vec<RunInput> = (0..c.plaintexts).map(|r| run_input(c, r)).collect();
    let key_for = |k: u32, x0: &str| {
        base.with_fields(|f| {
            f.k = k;
            f.x0 = x0.to_string();
        })
    };
    let lo = (base.n0() + 1) as f64;
    let hi = base.n_max() as f64;

    let mut results = Vec::with_capacity(c.sources.len());
    for spec in &c.sources {
        let outcomes: Vec<RunOutcome> = match spec {
            SourceSpec::KLogistic { k } => inputs
                .par_iter()
                .map(|input| {
                    let key = key_for(*k, &input.x0)?;
                    let source = KLogisticSource::for_key(&key);
                    encrypt_run(&key, source, input).map(|(o, _)| o)
                })
                .collect::<Result<_, _>>()?,
            SourceSpec::Baseline => inputs
                .par_iter()
                .map(|input| {
                    let source = BaselineSource::new(input.baseline_seed, base.precision());
                    encrypt_run(&base, source, input).map(|(o, _)| o)
                })
                .collect::<Result<_, _>>()?,
            SourceSpec::External { name, bytes } => {
                let mut source = ExternalSource::new(bytes.clone(), 0, base.precision(), name);
                let mut out = Vec::with_capacity(inputs.len());
                for input in &inputs {
                    let (outcome, rest) = encrypt_run(&base, source, input)?;
                    source = rest;
                    out.push(outcome);
                }
                out
            }
        };
        let mut histogram = vec![0u64; c.bins as usize];
        let mut totals = Vec::with_capacity(outcomes.len());
        for outcome in outcomes {
            match outcome {
                RunOutcome::Done(counts) => {
                    for &count in &counts {
                        histogram[log_bin(count, lo, hi, c.bins)] += 1;
                    }
                    totals.push(Some(counts.iter().map(|&x| x as u64).sum()));
                }
                RunOutcome::Exhausted => totals.push(None),
            }
        }
        results.push(CipherDistResult {
            label: spec.label(),
            n0: base.n0(),
            n_max: base.n_max(),
            edges: log_edges(lo, hi, c.bins),
            histogram,
            totals,
        });
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::Precision;
    use crate::cipher::{keygen, KeyOverrides};
    use rand::RngCore;

    fn template(p: Precision) -> KeyFields {
        keygen(1, &KeyOverrides {
            precision: Some(p),
            ..Default::default()
        })
        .unwrap()
        .fields()
        .clone()
    }

    #[test]
    fn edges_and_bins() {
        let e = log_edges(251.0, 65532.0, 50);
        assert_eq!(e.len(), 51);
        assert!((e[0] - 251.0).abs() < 1e-9);
        assert_eq!(e[50], 65532.0);
        assert_eq!(log_bin(251, 251.0, 65532.0, 50), 0);
        assert_eq!(log_bin(65532, 251.0, 65532.0, 50), 49);
        for c in [300u32, 1000, 5000, 40000] {
            let b = log_bin(c, 251.0, 65532.0, 50);
            assert!(e[b] <= c as f64 && (c as f64) < e[b + 1]);
        }
    }

    #[test]
    fn totals_match_and_zoom_shortens() {
        let mut cfg = CipherDistConfig::new(
            template(Precision::Decimal(64)),
            vec![SourceSpec::KLogistic { k: 0 }, SourceSpec::KLogistic { k: 4 }, SourceSpec::Baseline],
        );
        cfg.plaintexts = 6;
        cfg.letters = 300;
        let r = cipher_distribution_experiment(&cfg).unwrap();
        assert_eq!(r.len(), 3);
        for res in &r {
            assert_eq!(res.histogram.iter().sum::<u64>(), 6 * 300 - 300 * res.exhausted_runs() as u64);
            assert_eq!(res.totals.len(), 6);
        }
        let wins = r[0]
            .totals
            .iter()
            .zip(&r[1].totals)
            .filter(|(a, b)| matches!((a, b), (Some(a), Some(b)) if b < a))
            .count();
        assert!(wins >= 5, "{:?} vs {:?}", r[0].totals, r[1].totals);
        assert_eq!(r[2].label, "baseline:mt19937");
    }

    #[test]
    fn deep_zoom_approaches_random_bytes() {
        let mut bytes = vec![0u8; 16 << 20];
        sub_rng(99, 0).fill_bytes(&mut bytes);
        let external = SourceSpec::External {
            name: "noise".into(),
            bytes: bytes.into(),
        };
        let mut cfg = CipherDistConfig::new(
            template(Precision::Decimal(64)),
            vec![SourceSpec::KLogistic { k: 0 }, SourceSpec::KLogistic { k: 9 }, external],
        );
        cfg.plaintexts = 4;
        cfg.letters = 1000;
        let r = cipher_distribution_experiment(&cfg).unwrap();
        let (k0, k9, ext) = (&r[0], &r[1], &r[2]);
        assert!(k9.l1_distance(ext) < k0.l1_distance(ext), "{} vs {}", k9.l1_distance(ext), k0.l1_distance(ext));
    }

    #[test]
    fn small_external_file_runs_out() {
        let cfg = CipherDistConfig {
            plaintexts: 1,
            letters: 10,
            ..CipherDistConfig::new(
                template(Precision::Binary64),
                vec![SourceSpec::External {
                    name: "tiny".into(),
                    bytes: vec![7u8; 400].into(),
                }],
            )
        };
        assert!(matches!(
            cipher_distribution_experiment(&cfg),
            Err(AnalysisError::ExternalFileExhausted { draws: 100, .. })
        ));
    }

    #[test]
    fn no_letters_no_counts() {
        let mut cfg = CipherDistConfig::new(template(Precision::Binary64), vec![SourceSpec::KLogistic { k: 2 }]);
        cfg.plaintexts = 3;
        cfg.letters = 0;
        let r = cipher_distribution_experiment(&cfg).unwrap();
        assert_eq!(r[0].histogram.iter().sum::<u64>(), 0);
        assert_eq!(r[0].totals, vec![Some(0); 3]);
    }
}
