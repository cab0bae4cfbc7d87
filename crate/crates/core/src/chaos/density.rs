use std::f64::consts::PI;

use super::{ChaosError, Orbit, OrbitParams};

/// Invariant density of the fully chaotic logistic map,
/// `ρ(x) = 1 / (π·√(x(1−x)))`.
pub fn invariant_density(x: f64) -> Result<f64, ChaosError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(ChaosError::Domain(format!(
            "density is defined on ]0, 1[, got {x}"
        )));
    }
    Ok(1.0 / (PI * (x * (1.0 - x)).sqrt()))
}

/// CDF of the arcsine law, `F(x) = (2/π)·asin(√x)`, clamped to `[0, 1]`.
pub fn arcsine_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        2.0 / PI * x.sqrt().asin()
    }
}

/// Invariant measure of `[a, b]`, i.e. `∫_a^b ρ(x) dx`.
pub fn arcsine_measure(a: f64, b: f64) -> Result<f64, ChaosError> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a >= b {
        return Err(ChaosError::Domain(format!(
            "need 0 <= a < b <= 1, got a = {a}, b = {b}"
        )));
    }
    Ok(arcsine_cdf(b) - arcsine_cdf(a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    /// Terms that entered the average.
    pub terms: u64,
    /// Steps that landed exactly on `x = 1/2`, where the log is undefined.
    pub skipped: u64,
}

impl LyapunovEstimate {
    /// Steps needed to spread an `eps`-sized interval over the attractor.
    pub fn lyapunov_time(&self, eps: f64) -> f64 {
        lyapunov_time(eps, self.exponent)
    }
}

/// `−ln(ε)/λ`.
pub fn lyapunov_time(eps: f64, lambda: f64) -> f64 {
    -eps.ln() / lambda
}

/// Averages `ln|μ(1−2x_t)|` over `n` points after `transient` steps.
///
/// Only the underlying orbit matters here; the zoom depth in `params` is
/// ignored.
pub fn lyapunov_estimate(
    params: &OrbitParams,
    n: u64,
    transient: u64,
) -> Result<LyapunovEstimate, ChaosError> {
    let mut orbit = Orbit::new(params);
    orbit.discard(transient)?;
    let mu = params.mu.to_f64();
    let mut sum = 0.0;
    let mut terms = 0u64;
    let mut skipped = 0u64;
    for _ in 0..n {
        let x = orbit.step_underlying()?.to_f64();
        if x == 0.5 {
            skipped += 1;
            continue;
        }
        sum += (mu * (1.0 - 2.0 * x)).abs().ln();
        terms += 1;
    }
    if terms == 0 {
        return Err(ChaosError::Domain("no usable Lyapunov terms".into()));
    }
    Ok(LyapunovEstimate {
        exponent: sum / terms as f64,
        terms,
        skipped,
    })
}
