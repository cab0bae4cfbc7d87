use crate::chaos::{EvalOrder, OrbitParams, Precision};

use super::{orbit_samples, require, AnalysisError};

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapConfig {
    pub mu: String,
    pub x0: String,
    pub k: u32,
    pub n: usize,
    pub transient: u64,
    /// 2 for pairs, 3 for pairs and triples.
    pub dims: u8,
    pub precision: Precision,
}

impl Default for ReturnMapConfig {
    fn default() -> Self {
        ReturnMapConfig {
            mu: "4".into(),
            x0: "0.232323".into(),
            k: 0,
            n: 10_000,
            transient: 200,
            dims: 2,
            precision: Precision::Binary64,
        }
    }
}

/// `n` consecutive zoomed values of one orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapData {
    pub config: ReturnMapConfig,
    pub series: Vec<f64>,
}

impl ReturnMapData {
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series.windows(2).map(|w| (w[0], w[1]))
    }

    /// Empty unless `dims == 3`.
    pub fn triples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let take = if self.config.dims == 3 { usize::MAX } else { 0 };
        self.series.windows(3).take(take).map(|w| (w[0], w[1], w[2]))
    }

    /// Largest `|y_{t+1} − μ·y_t·(1−y_t)|` over the pairs, evaluated in
    /// binary64 in the given order.
    pub fn parabola_deviation(&self, mu: f64, order: EvalOrder) -> f64 {
        self.pairs()
            .map(|(a, b)| {
                let f = match order {
                    EvalOrder::ScaledFirst => mu * a * (1.0 - a),
                    EvalOrder::ProductFirst => mu * (a * (1.0 - a)),
                };
                (b - f).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn return_map_data(config: &ReturnMapConfig) -> Result<ReturnMapData, AnalysisError> {
    require(matches!(config.dims, 2 | 3), || {
        format!("dims must be 2 or 3, got {}", config.dims)
    })?;
    require(config.n >= config.dims as usize, || {
        format!("need at least {} points, got {}", config.dims, config.n)
    })?;
    let params = OrbitParams::new(&config.mu, &config.x0, config.k, config.precision)?;
    let series = orbit_samples(&params, config.n, config.transient)?;
    Ok(ReturnMapData {
        config: config.clone(),
        series,
    })
}

/// Pearson correlation of `(z_t, z_{t+lag})`.
pub fn lag_autocorrelation(series: &[f64], lag: usize) -> Result<f64, AnalysisError> {
    require(series.len() > lag + 2, || {
        format!("series of {} points is too short for lag {lag}", series.len())
    })?;
    let a = &series[..series.len() - lag];
    let b = &series[lag..];
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    Ok(sab / (saa * sbb).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(k: u32) -> ReturnMapData {
        return_map_data(&ReturnMapConfig {
            k,
            dims: 3,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn k0_pairs_lie_on_the_parabola() {
        let d = data(0);
        assert_eq!(d.pairs().count(), 9_999);
        assert_eq!(d.triples().count(), 9_998);
        assert_eq!(d.parabola_deviation(4.0, EvalOrder::ScaledFirst), 0.0);
    }

    #[test]
    fn zoom_breaks_the_parabola() {
        assert!(data(1).parabola_deviation(4.0, EvalOrder::ScaledFirst) > 0.1);
    }

    #[test]
    fn zoom_decorrelates() {
        for k in [3, 4] {
            let r = lag_autocorrelation(&data(k).series, 1).unwrap().abs();
            assert!(r < 0.05, "k = {k}: {r}");
        }
        // At mu = 4 the k = 0 lag-1 correlation vanishes as well (the map is
        // uncorrelated under its arcsine measure), so compare at mu = 3.8.
        let cfg = ReturnMapConfig {
            mu: "3.8".into(),
            ..Default::default()
        };
        let r0 = lag_autocorrelation(&return_map_data(&cfg).unwrap().series, 1).unwrap().abs();
        let r4 = lag_autocorrelation(
            &return_map_data(&ReturnMapConfig { k: 4, ..cfg }).unwrap().series,
            1,
        )
        .unwrap()
        .abs();
        assert!(r0 > 10.0 * r4, "{r0} vs {r4}");
    }

    #[test]
    fn autocorrelation_edge_cases() {
        assert!(matches!(lag_autocorrelation(&[0.5; 10], 1), Err(AnalysisError::ZeroVariance)));
        let ramp: Vec<f64> = (0..100).map(|t| t as f64).collect();
        assert!((lag_autocorrelation(&ramp, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(lag_autocorrelation(&[1.0, 2.0, 3.0], 1).is_err());
    }

    #[test]
    fn bad_dims() {
        let cfg = ReturnMapConfig {
            dims: 4,
            ..Default::default()
        };
        assert!(return_map_data(&cfg).is_err());
    }
}
