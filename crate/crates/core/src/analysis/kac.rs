use crate::chaos::{arcsine_measure, Orbit, OrbitParams, Precision, RealValue};
use crate::cipher::Partition;

use super::{require, AnalysisError};

#[derive(Debug, Clone, PartialEq)]
pub struct KacConfig {
    pub mu: String,
    pub x0: String,
    pub k: u32,
    pub precision: Precision,
    pub x_min: String,
    pub x_max: String,
    pub sites: u32,
    pub site: u32,
    pub min_returns: u64,
    pub transient: u64,
    /// Give up after this many steps.
    pub max_steps: u64,
}

impl Default for KacConfig {
    fn default() -> Self {
        KacConfig {
            mu: "4".into(),
            x0: "0.232323".into(),
            k: 0,
            precision: Precision::default_decimal(),
            x_min: "0.2".into(),
            x_max: "0.8".into(),
            sites: 256,
            site: 104,
            min_returns: 2000,
            transient: 1000,
            max_steps: 50_000_000,
        }
    }
}

/// Mean recurrence time to one site against the reciprocal of its measure.
#[derive(Debug, Clone, PartialEq)]
pub struct KacReport {
    pub site: u32,
    pub predicted_measure: f64,
    pub predicted_mean: f64,
    pub empirical_mean: f64,
    pub relative_error: f64,
    pub returns: u64,
}

/// The measure of `[lo, hi)` the zoomed orbit should see: arcsine for
/// `k = 0` at `μ = 4`, plain length from `k = 3` on. For `k = 1, 2` the
/// distribution is in between and there is no closed form.
fn predicted_measure(cfg: &KacConfig, lo: f64, hi: f64) -> Result<f64, AnalysisError> {
    match cfg.k {
        0 => {
            require(cfg.mu.trim() == "4" || cfg.mu.trim() == "4.0", || {
                format!("the arcsine prediction needs mu = 4, got {}", cfg.mu)
            })?;
            Ok(arcsine_measure(lo, hi)?)
        }
        1 | 2 => Err(AnalysisError::InvalidInput(format!(
            "no measure prediction for k = {}; use k = 0 or k >= 3",
            cfg.k
        ))),
        _ => Ok(hi - lo),
    }
}

pub fn kac_report(config: &KacConfig) -> Result<KacReport, AnalysisError> {
    let c = config;
    require(c.min_returns > 0, || "min_returns must be positive".into())?;
    let lo = RealValue::parse(&c.x_min, c.precision)?;
    let hi = RealValue::parse(&c.x_max, c.precision)?;
    let partition = Partition::new(&lo, &hi, c.sites)
        .map_err(|e| AnalysisError::InvalidInput(e.to_string()))?;
    let (lower, upper) = partition
        .site_bounds(c.site)
        .map_err(|e| AnalysisError::InvalidInput(e.to_string()))?;
    let measure = predicted_measure(c, lower.to_f64(), upper.to_f64())?;

    let params = OrbitParams::new(&c.mu, &c.x0, c.k, c.precision)?;
    let mut orbit = Orbit::new(&params);
    orbit.discard(c.transient)?;
    let mut last_visit: Option<u64> = None;
    let mut returns = 0u64;
    let mut total = 0u64;
    let mut t = 0u64;
    while returns < c.min_returns {
        if t == c.max_steps {
            return Err(AnalysisError::InsufficientReturns {
                observed: returns,
                needed: c.min_returns,
                steps: t,
            });
        }
        t += 1;
        let y = orbit.next_zoomed()?;
        if y >= lower && y < upper {
            if let Some(prev) = last_visit {
                total += t - prev;
                returns += 1;
            }
            last_visit = Some(t);
        }
    }
    let empirical_mean = total as f64 / returns as f64;
    let predicted_mean = 1.0 / measure;
    Ok(KacReport {
        site: c.site,
        predicted_measure: measure,
        predicted_mean,
        empirical_mean,
        relative_error: (empirical_mean - predicted_mean).abs() / predicted_mean,
        returns,
    })
}
