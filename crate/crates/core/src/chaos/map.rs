use std::fmt;

use super::real::check_literal;
use super::{ChaosError, Precision, RealValue};

/// The order in which `μ·x·(1−x)` is evaluated.
///
/// Each product rounds (binary64) or truncates (decimal) separately, so the
/// two orders produce different orbits after a few dozen steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EvalOrder {
    /// `(μ·x)·(1−x)`. With `μ = 3.8`, `x0 = 0.232323` this order encrypts
    /// "hi" to 1713, 364.
    #[default]
    ScaledFirst,
    /// `μ·(x·(1−x))`.
    ProductFirst,
}

impl fmt::Display for EvalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalOrder::ScaledFirst => "scaled_first",
            EvalOrder::ProductFirst => "product_first",
        })
    }
}

impl std::str::FromStr for EvalOrder {
    type Err = ChaosError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "scaled_first" => Ok(EvalOrder::ScaledFirst),
            "product_first" => Ok(EvalOrder::ProductFirst),
            other => Err(ChaosError::InvalidParams(format!(
                "unknown evaluation order `{other}`"
            ))),
        }
    }
}

/// The control parameter `μ`, kept as its exact decimal literal so a key
/// means the same thing under every backend.
#[derive(Clone, PartialEq)]
pub struct Coefficient {
    text: String,
    value: RealValue,
}

impl Coefficient {
    pub fn parse(text: &str, precision: Precision) -> Result<Self, ChaosError> {
        let text = text.trim();
        check_literal(text)?;
        let value = RealValue::parse(text, precision)?;
        let four = RealValue::parse("4", precision)?;
        if value > four {
            return Err(ChaosError::InvalidParams(format!(
                "mu = {text} is outside [0, 4]"
            )));
        }
        Ok(Coefficient {
            text: text.to_string(),
            value,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> &RealValue {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient({})", self.text)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// One application of the logistic map under the value's backend.
///
/// Fails with [`ChaosError::DegenerateOrbit`] when the result is exactly 0 or
/// 1, after which the orbit can never leave the fixed point at 0.
pub fn logistic_step(
    x: &RealValue,
    mu: &Coefficient,
    order: EvalOrder,
) -> Result<RealValue, ChaosError> {
    if *x < RealValue::zero(x.precision()) || x.to_f64() > 1.0 {
        return Err(ChaosError::Domain(format!("x = {x} is outside [0, 1]")));
    }
    let next = raw_step(x, mu.value(), order);
    if next.is_zero() || next.is_one() {
        return Err(ChaosError::DegenerateOrbit {
            iteration: 1,
            value: next.to_string(),
        });
    }
    Ok(next)
}

pub(crate) fn raw_step(x: &RealValue, mu: &RealValue, order: EvalOrder) -> RealValue {
    let complement = x.one_minus();
    match order {
        EvalOrder::ScaledFirst => mu.mul(x).mul(&complement),
        EvalOrder::ProductFirst => mu.mul(&x.mul(&complement)),
    }
}

/// `φ_k(x)`: the fractional part of `x·10^k`.
///
/// Decimal mode drops the first `k` fractional digits exactly; `k = 0` is the
/// identity. A zero result means the digits ran out.
pub fn deep_zoom(x: &RealValue, k: u32) -> Result<RealValue, ChaosError> {
    if !x.in_open_unit() {
        return Err(ChaosError::Domain(format!("x = {x} is outside ]0, 1[")));
    }
    if k > x.precision().max_zoom() {
        return Err(ChaosError::InvalidParams(format!(
            "zoom depth {k} exceeds {} for {}",
            x.precision().max_zoom(),
            x.precision()
        )));
    }
    if k == 0 {
        return Ok(x.clone());
    }
    let y = x.shift_digits(k);
    if y.is_zero() {
        return Err(ChaosError::ZoomExhausted { iteration: 0 });
    }
    Ok(y)
}

/// The logistic map bound to one `μ`, precision and evaluation order.
#[derive(Debug, Clone)]
pub struct LogisticMap {
    mu: Coefficient,
    order: EvalOrder,
}

impl LogisticMap {
    pub fn new(mu: Coefficient, order: EvalOrder) -> Self {
        LogisticMap { mu, order }
    }

    pub fn mu(&self) -> &Coefficient {
        &self.mu
    }

    pub fn order(&self) -> EvalOrder {
        self.order
    }

    /// Unchecked step; callers test the result for degeneracy themselves.
    pub(crate) fn apply(&self, x: &RealValue) -> RealValue {
        raw_step(x, self.mu.value(), self.order)
    }
}
