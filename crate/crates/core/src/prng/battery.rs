//! Three bit-level tests in the style of NIST SP 800-22: frequency
//! (monobit), runs, and frequency within a block.
//!
//! Bits are taken from 32-bit words most significant bit first.

use std::io::Write;

use statrs::function::erf::erfc;
use crate::stats::igamc;
use thiserror::Error;

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_BLOCK_LEN: usize = 128;
const MIN_BITS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BatteryError {
    #[error("{test} needs at least {needed} bits, got {got}")]
    TooFewBits {
        test: &'static str,
        needed: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryReport {
    pub test: &'static str,
    pub n_bits: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub passed: bool,
    /// Why the test failed without computing a p-value, if it did.
    pub note: Option<&'static str>,
}

impl BatteryReport {
    fn new(test: &'static str, n_bits: usize, statistic: f64, p_value: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        BatteryReport {
            test,
            n_bits,
            statistic,
            p_value,
            alpha: DEFAULT_ALPHA,
            passed: p_value >= DEFAULT_ALPHA,
            note: None,
        }
    }

    /// Re-judges the report at another significance level.
    pub fn at_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.passed = self.note.is_none() && self.p_value >= alpha;
        self
    }
}

pub fn bits_from_words(words: &[u32]) -> Vec<bool> {
    let mut bits = Vec::with_capacity(words.len() * 32);
    for &w in words {
        for shift in (0..32).rev() {
            bits.push((w >> shift) & 1 == 1);
        }
    }
    bits
}

fn require(test: &'static str, bits: &[bool], needed: usize) -> Result<(), BatteryError> {
    if bits.len() < needed {
        return Err(BatteryError::TooFewBits {
            test,
            needed,
            got: bits.len(),
        });
    }
    Ok(())
}

/// `s = |Σ(2b−1)|/√n`, `p = erfc(s/√2)`.
pub fn monobit_test(bits: &[bool]) -> Result<BatteryReport, BatteryError> {
    require("frequency", bits, MIN_BITS)?;
    let n = bits.len() as f64;
    let sum: i64 = bits.iter().map(|&b| if b { 1 } else { -1 }).sum();
    let s_obs = sum.unsigned_abs() as f64 / n.sqrt();
    let p = erfc(s_obs / std::f64::consts::SQRT_2);
    Ok(BatteryReport::new("frequency", bits.len(), s_obs, p))
}

/// Counts maximal runs `V` and compares with `2nπ(1−π)`.
///
/// When the ones fraction is already too far from 1/2 the runs statistic is
/// meaningless; the report fails with a "frequency prerequisite" note.
pub fn runs_test(bits: &[bool]) -> Result<BatteryReport, BatteryError> {
    require("runs", bits, MIN_BITS)?;
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b).count() as f64;
    let pi = ones / n;
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let v = runs as f64;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        let mut r = BatteryReport::new("runs", bits.len(), v, 0.0);
        r.note = Some("frequency prerequisite");
        return Ok(r);
    }
    let spread = pi * (1.0 - pi);
    let p = erfc((v - 2.0 * n * spread).abs() / (2.0 * (2.0 * n).sqrt() * spread));
    Ok(BatteryReport::new("runs", bits.len(), v, p))
}

/// `χ² = 4m·Σ(π_i − 1/2)²` over `⌊n/m⌋` blocks, `p = Q(N/2, χ²/2)`.
pub fn block_frequency_test(bits: &[bool], block_len: usize) -> Result<BatteryReport, BatteryError> {
    assert!(block_len > 0);
    require("block_frequency", bits, 100 * block_len)?;
    let blocks = bits.len() / block_len;
    let m = block_len as f64;
    let chi2: f64 = bits
        .chunks_exact(block_len)
        .map(|block| {
            let pi = block.iter().filter(|&&b| b).count() as f64 / m;
            (pi - 0.5) * (pi - 0.5)
        })
        .sum::<f64>()
        * 4.0
        * m;
    let p = igamc(blocks as f64 / 2.0, chi2 / 2.0);
    Ok(BatteryReport::new("block_frequency", bits.len(), chi2, p))
}

/// Runs all three tests with default settings.
pub fn run_battery(bits: &[bool]) -> Result<Vec<BatteryReport>, BatteryError> {
    Ok(vec![
        monobit_test(bits)?,
        runs_test(bits)?,
        block_frequency_test(bits, DEFAULT_BLOCK_LEN)?,
    ])
}

/// Writes `test,name,n_bits,statistic,p_value,alpha,pass`, where `name`
/// labels the input stream.
pub fn write_reports_csv<W: Write>(
    rows: &[(String, BatteryReport)],
    sink: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["test", "name", "n_bits", "statistic", "p_value", "alpha", "pass"])?;
    for (name, r) in rows {
        w.write_record([
            r.test.to_string(),
            name.clone(),
            r.n_bits.to_string(),
            format!("{:?}", r.statistic),
            format!("{:?}", r.p_value),
            format!("{:?}", r.alpha),
            r.passed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(n: usize) -> Vec<bool> {
        (0..n).map(|i| i % 2 == 1).collect()
    }

    #[test]
    fn monobit_extremes() {
        let r = monobit_test(&[false; 100]).unwrap();
        assert!(r.p_value < 1e-20);
        assert!(!r.passed);
        let r = monobit_test(&alternating(100)).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(r.passed);
        assert!(matches!(monobit_test(&[true; 99]), Err(BatteryError::TooFewBits { .. })));
    }

    #[test]
    fn monobit_reference_vector() {
        // Worked example of SP 800-22 section 2.1.8: S = -16, p = 0.109599.
        let e = "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";
        let bits: Vec<bool> = e.bytes().map(|b| b == b'1').collect();
        let r = monobit_test(&bits).unwrap();
        assert!((r.p_value - 0.109599).abs() < 1e-6, "{}", r.p_value);
    }

    #[test]
    fn runs_reference_vector() {
        // Worked example of SP 800-22 section 2.3.8: V = 52, p = 0.500798.
        let e = "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";
        let bits: Vec<bool> = e.bytes().map(|b| b == b'1').collect();
        let r = runs_test(&bits).unwrap();
        assert_eq!(r.statistic, 52.0);
        assert!((r.p_value - 0.500798).abs() < 1e-6, "{}", r.p_value);
    }

    #[test]
    fn runs_alternating_fails() {
        let r = runs_test(&alternating(100)).unwrap();
        assert_eq!(r.statistic, 100.0);
        assert!(r.p_value < 1e-10);
        assert!(!r.passed);
    }

    #[test]
    fn runs_prerequisite() {
        let mut bits = vec![true; 80];
        bits.extend(vec![false; 20]);
        let r = runs_test(&bits).unwrap();
        assert!(!r.passed);
        assert_eq!(r.note, Some("frequency prerequisite"));
        assert!(!r.at_alpha(0.0).passed);
    }

    #[test]
    fn block_frequency_all_ones() {
        let r = block_frequency_test(&vec![true; 128 * 100], 128).unwrap();
        assert!(r.p_value < 1e-10);
        assert!(!r.passed);
        assert!(block_frequency_test(&vec![true; 128 * 99], 128).is_err());
    }

    #[test]
    fn block_frequency_balanced_blocks_pass() {
        let r = block_frequency_test(&alternating(128 * 100), 128).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn msb_first() {
        let bits = bits_from_words(&[0x8000_0001]);
        assert!(bits[0]);
        assert!(bits[31]);
        assert_eq!(bits.iter().filter(|&&b| b).count(), 2);
    }

    #[test]
    fn csv_layout() {
        let r = monobit_test(&alternating(100)).unwrap();
        let mut out = Vec::new();
        write_reports_csv(&[("k=5 seed=0".into(), r)], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "test,name,n_bits,statistic,p_value,alpha,pass");
        assert_eq!(lines.next().unwrap(), "frequency,k=5 seed=0,100,0.0,1.0,0.01,true");
    }
}
