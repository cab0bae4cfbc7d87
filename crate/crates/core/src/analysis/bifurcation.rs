use std::io::Write;

use rayon::prelude::*;

use crate::chaos::{ChaosError, Orbit, OrbitParams, Precision};

use super::{require, AnalysisError};

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationConfig {
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_steps: u32,
    pub k: u32,
    /// Steps per `μ`, transient included.
    pub iters: u64,
    pub transient: u64,
    pub x_bins: u32,
    pub x0: String,
    pub precision: Precision,
}

impl Default for BifurcationConfig {
    fn default() -> Self {
        BifurcationConfig {
            mu_lo: 3.6,
            mu_hi: 4.0,
            mu_steps: 400,
            k: 0,
            iters: 100_000,
            transient: 200,
            x_bins: 400,
            x0: "0.232323".into(),
            precision: Precision::Binary64,
        }
    }
}

/// Visit counts per `(μ, x-bin)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationGrid {
    pub config: BifurcationConfig,
    /// The exact `μ` literal of each column.
    pub mu: Vec<String>,
    /// `counts[column][bin]`.
    pub counts: Vec<Vec<u64>>,
    /// Columns whose orbit degenerated, with the failing iteration.
    pub degenerate: Vec<(usize, u64)>,
}

impl BifurcationGrid {
    /// Fraction of a column's bins that were visited at least once.
    pub fn occupancy(&self, column: usize) -> f64 {
        let c = &self.counts[column];
        c.iter().filter(|&&n| n > 0).count() as f64 / c.len() as f64
    }

    pub fn occupied_bins(&self, column: usize) -> usize {
        self.counts[column].iter().filter(|&&n| n > 0).count()
    }

    /// Binary PGM, `μ` left to right, `x = 1` at the top, log-scaled.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let width = self.counts.len();
        let height = self.config.x_bins as usize;
        let max = self.counts.iter().flatten().copied().max().unwrap_or(0).max(1);
        let scale = (max as f64 + 1.0).ln();
        write!(w, "P5\n{width} {height}\n255\n")?;
        let mut row = vec![0u8; width];
        for bin in (0..height).rev() {
            for (col, px) in row.iter_mut().enumerate() {
                let n = self.counts[col][bin] as f64;
                // Dark on white.
                *px = 255 - ((n + 1.0).ln() / scale * 255.0).round() as u8;
            }
            w.write_all(&row)?;
        }
        Ok(())
    }
}

/// `μ` literal of column `i`, with ten fractional digits.
fn mu_literal(cfg: &BifurcationConfig, i: u32) -> String {
    let mu = if cfg.mu_steps == 1 {
        cfg.mu_lo
    } else {
        cfg.mu_lo + (cfg.mu_hi - cfg.mu_lo) * i as f64 / (cfg.mu_steps - 1) as f64
    };
    format!("{:.10}", mu.clamp(0.0, 4.0))
}

pub fn bifurcation_grid(config: &BifurcationConfig) -> Result<BifurcationGrid, AnalysisError> {
    let c = config;
    require(
        (0.0..=4.0).contains(&c.mu_lo) && (0.0..=4.0).contains(&c.mu_hi) && c.mu_lo <= c.mu_hi,
        || format!("mu range [{}, {}] must lie in [0, 4]", c.mu_lo, c.mu_hi),
    )?;
    require(c.mu_steps > 0 && c.x_bins > 0, || "grid sizes must be positive".into())?;
    require(c.iters > c.transient, || {
        format!("iters = {} leaves nothing after transient {}", c.iters, c.transient)
    })?;
    let columns = (0..c.mu_steps)
        .into_par_iter()
        .map(|i| {
            let mu = mu_literal(c, i);
            let params = OrbitParams::new(&mu, &c.x0, c.k, c.precision)?;
            let mut counts = vec![0u64; c.x_bins as usize];
            let mut orbit = Orbit::new(&params);
            let mut failed = None;
            let run = (|| -> Result<(), ChaosError> {
                orbit.discard(c.transient)?;
                for _ in c.transient..c.iters {
                    let y = orbit.next_zoomed()?;
                    counts[y.floor_scaled(c.x_bins as u64) as usize] += 1;
                }
                Ok(())
            })();
            match run {
                Ok(()) => {}
                Err(ChaosError::DegenerateOrbit { iteration, .. })
                | Err(ChaosError::ZoomExhausted { iteration }) => failed = Some(iteration),
                Err(e) => return Err(AnalysisError::Chaos(e)),
            }
            Ok((mu, counts, failed))
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let mut grid = BifurcationGrid {
        config: c.clone(),
        mu: Vec::with_capacity(columns.len()),
        counts: Vec::with_capacity(columns.len()),
        degenerate: Vec::new(),
    };
    for (i, (mu, counts, failed)) in columns.into_iter().enumerate() {
        if let Some(t) = failed {
            grid.degenerate.push((i, t));
        }
        grid.mu.push(mu);
        grid.counts.push(counts);
    }
    Ok(grid)
}
