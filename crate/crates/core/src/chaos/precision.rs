use std::fmt;
use std::str::FromStr;

use super::ChaosError;

/// Arithmetic backend for orbit generation.
///
/// `Binary64` uses IEEE-754 doubles with round-to-nearest-even.
/// `Decimal(P)` uses fixed-point decimals with `P` fractional digits and
/// truncation toward zero after every multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Binary64,
    Decimal(u32),
}

impl Precision {
    pub const DEFAULT_DECIMAL_DIGITS: u32 = 128;
    pub const MIN_DECIMAL_DIGITS: u32 = 32;
    /// Deepest zoom accepted in binary64 mode. Past this, `x·10^k` has no
    /// fractional bits left to keep.
    pub const MAX_BINARY64_ZOOM: u32 = 15;

    pub fn decimal(digits: u32) -> Result<Self, ChaosError> {
        let p = Precision::Decimal(digits);
        p.validate()?;
        Ok(p)
    }

    pub fn default_decimal() -> Self {
        Precision::Decimal(Self::DEFAULT_DECIMAL_DIGITS)
    }

    pub fn validate(&self) -> Result<(), ChaosError> {
        match *self {
            Precision::Binary64 => Ok(()),
            Precision::Decimal(p) if p >= Self::MIN_DECIMAL_DIGITS => Ok(()),
            Precision::Decimal(p) => Err(ChaosError::InvalidParams(format!(
                "decimal precision needs at least {} digits, got {p}",
                Self::MIN_DECIMAL_DIGITS
            ))),
        }
    }

    /// Largest zoom depth that keeps enough digits for site tests and
    /// 32-bit extraction.
    pub fn max_zoom(&self) -> u32 {
        match *self {
            Precision::Binary64 => Self::MAX_BINARY64_ZOOM,
            Precision::Decimal(p) => p.saturating_sub(Self::MIN_DECIMAL_DIGITS),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Binary64 => f.write_str("binary64"),
            Precision::Decimal(p) => write!(f, "decimal:{p}"),
        }
    }
}

impl FromStr for Precision {
    type Err = ChaosError;

    /// Accepts `binary64`, `decimal` (128 digits) and `decimal:P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let p = match s {
            "binary64" => Precision::Binary64,
            "decimal" => Precision::default_decimal(),
            _ => {
                let digits = s
                    .strip_prefix("decimal:")
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| {
                        ChaosError::InvalidParams(format!("unknown precision `{s}`"))
                    })?;
                Precision::Decimal(digits)
            }
        };
        p.validate()?;
        Ok(p)
    }
}
