//! Deep-zoom k-logistic map as a pseudo-random source, the ergodic
//! return-time cipher built on it, and the statistics used to judge both.

pub mod analysis;
pub mod chaos;
pub mod cipher;
pub mod decimal;
pub mod prng;
pub mod seed;
mod stats;

pub use chaos::{ChaosError, Coefficient, EvalOrder, OrbitParams, Precision, RealValue};
