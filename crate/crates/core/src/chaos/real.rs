use std::cmp::Ordering;
use std::fmt;

use super::{ChaosError, Precision};
use crate::decimal::Decimal;

const POW10_F64: [f64; 23] = [
    1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16,
    1e17, 1e18, 1e19, 1e20, 1e21, 1e22,
];

/// A real number held under one of the two precision backends.
///
/// Values of different backends never meet: comparing or combining them is
/// a programming error and panics.
#[derive(Clone, PartialEq)]
pub enum RealValue {
    Binary64(f64),
    Decimal(Decimal),
}

/// Checks that `s` is a plain unsigned decimal literal (`3.8`, `0.25`, `4`).
pub(crate) fn check_literal(s: &str) -> Result<(), ChaosError> {
    let (int, frac) = s.split_once('.').unwrap_or((s, "0"));
    let ok = !int.is_empty()
        && !frac.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(ChaosError::InvalidNumber(s.to_string()))
    }
}

impl RealValue {
    /// Parses an exact decimal literal under `precision`.
    ///
    /// Binary64 rounds to the nearest double; decimal mode keeps every digit
    /// and rejects literals with more than `P` fractional digits.
    pub fn parse(s: &str, precision: Precision) -> Result<Self, ChaosError> {
        let s = s.trim();
        check_literal(s)?;
        match precision {
            Precision::Binary64 => s
                .parse::<f64>()
                .map(RealValue::Binary64)
                .map_err(|_| ChaosError::InvalidNumber(s.to_string())),
            Precision::Decimal(p) => Decimal::parse(s, p)
                .map(RealValue::Decimal)
                .map_err(|e| ChaosError::InvalidNumber(e.to_string())),
        }
    }

    /// `word / 2^32`, exact under both backends.
    pub fn from_word32(word: u32, precision: Precision) -> Self {
        match precision {
            Precision::Binary64 => RealValue::Binary64(word as f64 / 4_294_967_296.0),
            Precision::Decimal(p) => RealValue::Decimal(Decimal::from_word32(word, p)),
        }
    }

    pub fn zero(precision: Precision) -> Self {
        match precision {
            Precision::Binary64 => RealValue::Binary64(0.0),
            Precision::Decimal(p) => RealValue::Decimal(Decimal::zero(p)),
        }
    }

    pub fn precision(&self) -> Precision {
        match self {
            RealValue::Binary64(_) => Precision::Binary64,
            RealValue::Decimal(d) => Precision::Decimal(d.digits()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealValue::Binary64(v) => *v,
            RealValue::Decimal(d) => d.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RealValue::Binary64(v) => *v == 0.0,
            RealValue::Decimal(d) => d.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RealValue::Binary64(v) => *v == 1.0,
            RealValue::Decimal(d) => d.is_one(),
        }
    }

    /// True when `0 < self < 1`.
    pub fn in_open_unit(&self) -> bool {
        match self {
            RealValue::Binary64(v) => *v > 0.0 && *v < 1.0,
            RealValue::Decimal(d) => !d.is_zero() && d.integer_part() == 0,
        }
    }

    /// Fractional part of `self · 10^k`. In decimal mode this is an exact
    /// left shift of the digit string.
    pub fn shift_digits(&self, k: u32) -> RealValue {
        match self {
            RealValue::Binary64(v) => {
                let scale = POW10_F64[k.min(22) as usize];
                let s = v * scale;
                RealValue::Binary64(s - s.floor())
            }
            RealValue::Decimal(d) => RealValue::Decimal(d.shift_fraction(k)),
        }
    }

    pub(crate) fn mul(&self, rhs: &RealValue) -> RealValue {
        match (self, rhs) {
            (RealValue::Binary64(a), RealValue::Binary64(b)) => RealValue::Binary64(a * b),
            (RealValue::Decimal(a), RealValue::Decimal(b)) => RealValue::Decimal(a.mul_trunc(b)),
            _ => mixed(),
        }
    }

    pub(crate) fn add(&self, rhs: &RealValue) -> RealValue {
        match (self, rhs) {
            (RealValue::Binary64(a), RealValue::Binary64(b)) => RealValue::Binary64(a + b),
            (RealValue::Decimal(a), RealValue::Decimal(b)) => RealValue::Decimal(a.add(b)),
            _ => mixed(),
        }
    }

    /// `self - rhs`; in decimal mode `None` when the result would be negative.
    pub(crate) fn sub(&self, rhs: &RealValue) -> Option<RealValue> {
        match (self, rhs) {
            (RealValue::Binary64(a), RealValue::Binary64(b)) => Some(RealValue::Binary64(a - b)),
            (RealValue::Decimal(a), RealValue::Decimal(b)) => {
                a.checked_sub(b).map(RealValue::Decimal)
            }
            _ => mixed(),
        }
    }

    /// `1 - self`, for `self` in `[0, 1]`.
    pub(crate) fn one_minus(&self) -> RealValue {
        match self {
            RealValue::Binary64(v) => RealValue::Binary64(1.0 - v),
            RealValue::Decimal(d) => {
                RealValue::Decimal(d.one_minus().expect("one_minus on a value above 1"))
            }
        }
    }

    pub(crate) fn mul_small(&self, m: u32) -> RealValue {
        match self {
            RealValue::Binary64(v) => RealValue::Binary64(v * m as f64),
            RealValue::Decimal(d) => RealValue::Decimal(d.mul_small(m)),
        }
    }

    pub(crate) fn div_small(&self, m: u32) -> RealValue {
        match self {
            RealValue::Binary64(v) => RealValue::Binary64(v / m as f64),
            RealValue::Decimal(d) => RealValue::Decimal(d.div_small(m)),
        }
    }

    /// `floor(self · 2^32)` for `self` in `[0, 1)`.
    pub fn floor_times_2_32(&self) -> u32 {
        self.floor_scaled(1 << 32) as u32
    }

    /// `floor(self · m)` for `self` in `[0, 1)` and `m <= 2^32`; exact in
    /// decimal mode. Used for word extraction and histogram binning.
    pub fn floor_scaled(&self, m: u64) -> u64 {
        assert!(m <= 1 << 32);
        match self {
            RealValue::Binary64(v) => {
                debug_assert!((0.0..1.0).contains(v));
                ((v * m as f64).floor() as u64).min(m - 1)
            }
            RealValue::Decimal(d) => {
                debug_assert_eq!(d.integer_part(), 0);
                d.fraction_times_floor(m)
            }
        }
    }

    /// Renders `digits` fractional digits: rounded in binary64 (as `printf`
    /// would), truncated in decimal mode.
    pub fn format_fixed(&self, digits: usize) -> String {
        match self {
            RealValue::Binary64(v) => format!("{v:.digits$}"),
            RealValue::Decimal(d) => {
                let mut frac = d.fraction_digits();
                frac.truncate(digits);
                while frac.len() < digits {
                    frac.push('0');
                }
                format!("{}.{}", d.integer_part(), frac)
            }
        }
    }
}

#[cold]
fn mixed() -> ! {
    panic!("cannot combine binary64 and decimal values")
}

impl PartialOrd for RealValue {
    /// Panics on mixed backends.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (RealValue::Binary64(a), RealValue::Binary64(b)) => a.partial_cmp(b),
            (RealValue::Decimal(a), RealValue::Decimal(b)) => Some(a.cmp(b)),
            _ => mixed(),
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Binary64(v) => write!(f, "{v}"),
            RealValue::Decimal(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Debug for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Binary64(v) => write!(f, "Binary64({v:e})"),
            RealValue::Decimal(d) => write!(f, "{d:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_both_backends() {
        let b = RealValue::parse("0.232323", Precision::Binary64).unwrap();
        assert_eq!(b, RealValue::Binary64(0.232323));
        let d = RealValue::parse("0.232323", Precision::Decimal(32)).unwrap();
        assert_eq!(d.to_string(), "0.232323");
        assert!(RealValue::parse("1e-3", Precision::Binary64).is_err());
        assert!(RealValue::parse("", Precision::Binary64).is_err());
    }

    #[test]
    fn word_scaling_is_exact() {
        for p in [Precision::Binary64, Precision::Decimal(40)] {
            for w in [0u32, 1, 12345, 0x8000_0000, u32::MAX] {
                assert_eq!(RealValue::from_word32(w, p).floor_times_2_32(), w);
            }
        }
    }

    #[test]
    fn fixed_formatting() {
        let v = RealValue::Binary64(0.441609054471359);
        assert_eq!(v.format_fixed(14), "0.44160905447136");
        let d = RealValue::parse("0.123456789", Precision::Decimal(32)).unwrap();
        assert_eq!(d.format_fixed(4), "0.1234");
        assert_eq!(d.format_fixed(12), "0.123456789000");
    }

    #[test]
    #[should_panic(expected = "cannot combine")]
    fn mixed_comparison_panics() {
        let a = RealValue::Binary64(0.5);
        let b = RealValue::parse("0.5", Precision::Decimal(32)).unwrap();
        let _ = a < b;
    }
}
