//! Logistic and k-logistic orbits under binary64 or fixed-point decimal
//! arithmetic, plus the analytic invariant density of the `μ = 4` map.

mod density;
mod map;
mod orbit;
mod precision;
mod real;

use thiserror::Error;

pub use density::{
    arcsine_cdf, arcsine_measure, invariant_density, lyapunov_estimate, lyapunov_time,
    LyapunovEstimate,
};
pub use map::{deep_zoom, logistic_step, Coefficient, EvalOrder, LogisticMap};
pub use orbit::{orbit, Orbit, OrbitParams, OrbitPoint};
pub use precision::Precision;
pub use real::RealValue;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChaosError {
    /// The orbit hit 0, 1 or a fixed point and can no longer be chaotic.
    #[error("orbit degenerated at iteration {iteration} (x = {value})")]
    DegenerateOrbit { iteration: u64, value: String },
    /// The zoomed value has no nonzero digits left.
    #[error("deep zoom exhausted all digits at iteration {iteration}")]
    ZoomExhausted { iteration: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid number: {0}")]
    InvalidNumber(String),
}
