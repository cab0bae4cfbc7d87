use super::map::LogisticMap;
use super::{ChaosError, Coefficient, EvalOrder, Precision, RealValue};

/// Everything needed to reproduce one k-logistic trajectory.
#[derive(Debug, Clone)]
pub struct OrbitParams {
    pub mu: Coefficient,
    pub x0: RealValue,
    pub k: u32,
    pub precision: Precision,
    pub order: EvalOrder,
}

impl OrbitParams {
    /// Builds and validates parameters from decimal literals.
    pub fn new(mu: &str, x0: &str, k: u32, precision: Precision) -> Result<Self, ChaosError> {
        precision.validate()?;
        let params = OrbitParams {
            mu: Coefficient::parse(mu, precision)?,
            x0: RealValue::parse(x0, precision)?,
            k,
            precision,
            order: EvalOrder::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_order(mut self, order: EvalOrder) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self) -> Result<(), ChaosError> {
        if !self.x0.in_open_unit() {
            return Err(ChaosError::InvalidParams(format!(
                "x0 = {} is outside ]0, 1[",
                self.x0
            )));
        }
        if self.x0.precision() != self.precision || self.mu.value().precision() != self.precision
        {
            return Err(ChaosError::InvalidParams(
                "mu and x0 must use the orbit's precision".into(),
            ));
        }
        if self.k > self.precision.max_zoom() {
            return Err(ChaosError::InvalidParams(format!(
                "zoom depth {} exceeds {} for {}",
                self.k,
                self.precision.max_zoom(),
                self.precision
            )));
        }
        Ok(())
    }
}

/// One orbit sample: the underlying value `x` and its zoomed image `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub t: u64,
    pub x: RealValue,
    pub y: RealValue,
}

/// A lazy k-logistic trajectory.
///
/// Yields `x_1, x_2, …` (the seed `x_0` itself is not yielded). The first
/// error ends the iteration.
#[derive(Debug, Clone)]
pub struct Orbit {
    map: LogisticMap,
    k: u32,
    x: RealValue,
    t: u64,
    failed: bool,
}

impl Orbit {
    pub fn new(params: &OrbitParams) -> Self {
        Orbit {
            map: LogisticMap::new(params.mu.clone(), params.order),
            k: params.k,
            x: params.x0.clone(),
            t: 0,
            failed: false,
        }
    }

    pub fn map(&self) -> &LogisticMap {
        &self.map
    }

    pub fn zoom(&self) -> u32 {
        self.k
    }

    /// The current underlying state `x_t`.
    pub fn state(&self) -> &RealValue {
        &self.x
    }

    pub fn iteration(&self) -> u64 {
        self.t
    }

    /// Replaces the underlying state, keeping the iteration counter.
    pub fn reseed(&mut self, x: RealValue) {
        self.x = x;
        self.failed = false;
    }

    /// Advances the underlying orbit one step without zooming.
    pub fn step_underlying(&mut self) -> Result<&RealValue, ChaosError> {
        let next = self.map.apply(&self.x);
        self.t += 1;
        if next.is_zero() || next.is_one() || next == self.x {
            self.failed = true;
            return Err(ChaosError::DegenerateOrbit {
                iteration: self.t,
                value: next.to_string(),
            });
        }
        self.x = next;
        Ok(&self.x)
    }

    /// Advances one step and returns the zoomed value `y_t`.
    pub fn next_zoomed(&mut self) -> Result<RealValue, ChaosError> {
        self.step_underlying()?;
        self.zoomed_state()
    }

    /// `φ_k` of the current state.
    pub fn zoomed_state(&self) -> Result<RealValue, ChaosError> {
        if self.k == 0 {
            return Ok(self.x.clone());
        }
        let y = self.x.shift_digits(self.k);
        if y.is_zero() {
            return Err(ChaosError::ZoomExhausted { iteration: self.t });
        }
        Ok(y)
    }

    /// Discards `n` steps.
    pub fn discard(&mut self, n: u64) -> Result<(), ChaosError> {
        for _ in 0..n {
            self.step_underlying()?;
        }
        Ok(())
    }
}

impl Iterator for Orbit {
    type Item = Result<OrbitPoint, ChaosError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.next_zoomed().map(|y| OrbitPoint {
            t: self.t,
            x: self.x.clone(),
            y,
        });
        if item.is_err() {
            self.failed = true;
        }
        Some(item)
    }
}

/// `n` orbit points after discarding `transient` steps.
///
/// Transient failures surface as the first item.
pub fn orbit(
    params: &OrbitParams,
    n: usize,
    transient: u64,
) -> impl Iterator<Item = Result<OrbitPoint, ChaosError>> {
    let mut orbit = Orbit::new(params);
    let warmup = orbit.discard(transient);
    let (head, rest) = match warmup {
        Ok(()) => (None, Some(orbit.take(n))),
        Err(e) => (Some(Err(e)), None),
    };
    head.into_iter().chain(rest.into_iter().flatten())
}
