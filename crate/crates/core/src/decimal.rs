//! Fixed-point decimal numbers with a fixed count of fractional digits.
//!
//! A [`Decimal`] stores `value = integer + fraction`, where the fraction is an
//! exact multiple of `10^-P` for the configured digit count `P`. Limbs are
//! base-10⁹ words, least significant first, with the final limb holding the
//! integer part. Digits below position `P` (padding in the lowest limb when
//! `P` is not a multiple of nine) are always zero.
//!
//! Addition and subtraction are exact. Multiplication computes the exact
//! product and then truncates toward zero to `P` digits, which keeps every
//! operation a pure function of its digit strings.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

const BASE: u64 = 1_000_000_000;
const LIMB_DIGITS: u32 = 9;

const POW10_U32: [u32; 10] = [
    1,
    10,
    100,
    1_000,
    10_000,
    100_000,
    1_000_000,
    10_000_000,
    100_000_000,
    1_000_000_000,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("`{0}` is not a plain decimal literal")]
    Syntax(String),
    #[error("`{input}` has {found} fractional digits but only {digits} are available")]
    TooManyDigits {
        input: String,
        found: usize,
        digits: u32,
    },
    #[error("integer part of `{0}` is too large")]
    IntegerOverflow(String),
    #[error("fractional digit count must be at least 1")]
    ZeroDigits,
}

/// An unsigned fixed-point decimal with exactly `digits` fractional digits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Decimal {
    digits: u32,
    limbs: Vec<u32>,
}

fn frac_limbs(digits: u32) -> usize {
    digits.div_ceil(LIMB_DIGITS) as usize
}

fn pad_unit(digits: u32) -> u32 {
    let pad = frac_limbs(digits) as u32 * LIMB_DIGITS - digits;
    POW10_U32[pad as usize]
}

impl Decimal {
    pub fn zero(digits: u32) -> Self {
        assert!(digits > 0, "decimal needs at least one fractional digit");
        Decimal {
            digits,
            limbs: vec![0; frac_limbs(digits) + 1],
        }
    }

    /// `10^-digits`, the smallest positive value.
    pub fn ulp(digits: u32) -> Self {
        let mut d = Decimal::zero(digits);
        d.limbs[0] = pad_unit(digits);
        d
    }

    pub fn from_integer(value: u32, digits: u32) -> Self {
        assert!((value as u64) < BASE, "integer part must be below 10^9");
        let mut d = Decimal::zero(digits);
        *d.limbs.last_mut().unwrap() = value;
        d
    }

    pub fn one(digits: u32) -> Self {
        Decimal::from_integer(1, digits)
    }

    /// Parses a plain literal such as `3.8`, `0.232323` or `4`.
    ///
    /// Inputs with more fractional digits than `digits` are rejected rather
    /// than truncated, so a parsed value always equals its literal.
    pub fn parse(input: &str, digits: u32) -> Result<Self, DecimalError> {
        if digits == 0 {
            return Err(DecimalError::ZeroDigits);
        }
        let s = input.trim();
        let (int_str, frac_str) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let well_formed = !int_str.is_empty()
            && int_str.bytes().all(|b| b.is_ascii_digit())
            && frac_str.bytes().all(|b| b.is_ascii_digit())
            && !(s.contains('.') && frac_str.is_empty());
        if !well_formed {
            return Err(DecimalError::Syntax(input.to_string()));
        }
        let significant_frac = frac_str.trim_end_matches('0');
        if significant_frac.len() > digits as usize {
            return Err(DecimalError::TooManyDigits {
                input: input.to_string(),
                found: frac_str.len(),
                digits,
            });
        }
        let int_trimmed = int_str.trim_start_matches('0');
        if int_trimmed.len() > LIMB_DIGITS as usize {
            return Err(DecimalError::IntegerOverflow(input.to_string()));
        }
        let int_value: u32 = if int_trimmed.is_empty() {
            0
        } else {
            int_trimmed.parse().expect("checked digits")
        };

        let mut d = Decimal::from_integer(int_value, digits);
        let n = frac_limbs(digits);
        // Limb n-1 holds fractional digits 1..=9, limb n-2 digits 10..=18, ...
        for (chunk_idx, chunk) in significant_frac.as_bytes().chunks(LIMB_DIGITS as usize).enumerate() {
            let mut v: u32 = 0;
            for &b in chunk {
                v = v * 10 + (b - b'0') as u32;
            }
            v *= POW10_U32[LIMB_DIGITS as usize - chunk.len()];
            d.limbs[n - 1 - chunk_idx] = v;
        }
        Ok(d)
    }

    /// Exact value of `word / 2^32`. Requires at least 32 fractional digits.
    pub fn from_word32(word: u32, digits: u32) -> Self {
        assert!(digits >= 32, "w/2^32 needs 32 fractional digits");
        // w / 2^32 = w * 5^32 / 10^32, and w * 5^32 < 10^32.
        const FIVE_POW_32: u128 = 23_283_064_365_386_962_890_625;
        let scaled = word as u128 * FIVE_POW_32;
        // Fractional digits 1..=9, 10..=18, 19..=27 and 28..=32 of the
        // 32-digit value `scaled / 10^32`.
        let mut d = Decimal::zero(digits);
        let n = frac_limbs(digits);
        d.limbs[n - 1] = (scaled / 10u128.pow(23)) as u32;
        d.limbs[n - 2] = (scaled / 10u128.pow(14) % BASE as u128) as u32;
        d.limbs[n - 3] = (scaled / 10u128.pow(5) % BASE as u128) as u32;
        d.limbs[n - 4] = (scaled % 100_000) as u32 * 10_000;
        d
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn integer_part(&self) -> u32 {
        *self.limbs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn is_one(&self) -> bool {
        self.integer_part() == 1 && self.fraction_is_zero()
    }

    fn fraction_is_zero(&self) -> bool {
        self.limbs[..self.limbs.len() - 1].iter().all(|&l| l == 0)
    }

    fn frac(&self) -> &[u32] {
        &self.limbs[..self.limbs.len() - 1]
    }

    fn check_same_scale(&self, rhs: &Decimal) {
        assert_eq!(
            self.digits, rhs.digits,
            "decimal operands must share a digit count"
        );
    }

    fn truncate_padding(&mut self) {
        let unit = pad_unit(self.digits);
        if unit > 1 {
            self.limbs[0] -= self.limbs[0] % unit;
        }
    }

    /// Exact sum. Panics if the integer part leaves the single integer limb.
    pub fn add(&self, rhs: &Decimal) -> Decimal {
        self.check_same_scale(rhs);
        let mut out = self.clone();
        let mut carry = 0u64;
        for (o, &r) in out.limbs.iter_mut().zip(&rhs.limbs) {
            let t = *o as u64 + r as u64 + carry;
            *o = (t % BASE) as u32;
            carry = t / BASE;
        }
        assert!(carry == 0, "decimal addition overflow");
        out
    }

    /// Exact difference, or `None` when `rhs > self`.
    pub fn checked_sub(&self, rhs: &Decimal) -> Option<Decimal> {
        self.check_same_scale(rhs);
        if self < rhs {
            return None;
        }
        let mut out = self.clone();
        let mut borrow = 0i64;
        for (o, &r) in out.limbs.iter_mut().zip(&rhs.limbs) {
            let mut t = *o as i64 - r as i64 - borrow;
            if t < 0 {
                t += BASE as i64;
                borrow = 1;
            } else {
                borrow = 0;
            }
            *o = t as u32;
        }
        debug_assert_eq!(borrow, 0);
        Some(out)
    }

    /// `1 - self` for values in `[0, 1]`.
    pub fn one_minus(&self) -> Option<Decimal> {
        Decimal::one(self.digits).checked_sub(self)
    }

    /// Product truncated toward zero to the shared digit count.
    ///
    /// Panics if the integer part of the product does not fit in one limb.
    pub fn mul_trunc(&self, rhs: &Decimal) -> Decimal {
        self.check_same_scale(rhs);
        let n = self.limbs.len();
        let l = n - 1;
        let mut prod = [0u64; 64];
        let mut heap;
        let prod: &mut [u64] = if 2 * n <= prod.len() {
            &mut prod[..2 * n]
        } else {
            heap = vec![0u64; 2 * n];
            &mut heap
        };
        // Accumulate uncarried column sums, then carry once. A column holds at
        // most n products below 10^18, which fits a u64 while n <= 18.
        if n <= 18 {
            let a = &self.limbs;
            let b: &[u32] = &rhs.limbs;
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                for (acc, &y) in prod[i..i + n].iter_mut().zip(b) {
                    *acc += x * y as u64;
                }
            }
            let mut carry = 0u64;
            for v in prod.iter_mut() {
                let t = *v + carry;
                *v = t % BASE;
                carry = t / BASE;
            }
        } else {
            for (i, &x) in self.limbs.iter().enumerate() {
                let x = x as u64;
                let mut carry = 0u64;
                for (j, &y) in rhs.limbs.iter().enumerate() {
                    let t = prod[i + j] + x * y as u64 + carry;
                    prod[i + j] = t % BASE;
                    carry = t / BASE;
                }
                prod[i + n] += carry;
            }
        }
        assert!(
            prod[l + n..].iter().all(|&v| v == 0),
            "decimal multiplication overflow"
        );
        let mut out = Decimal {
            digits: self.digits,
            limbs: prod[l..l + n].iter().map(|&v| v as u32).collect(),
        };
        out.truncate_padding();
        out
    }

    /// Multiplies by a small integer, exactly.
    pub fn mul_small(&self, m: u32) -> Decimal {
        let mut out = self.clone();
        let mut carry = 0u64;
        for o in out.limbs.iter_mut() {
            let t = *o as u64 * m as u64 + carry;
            *o = (t % BASE) as u32;
            carry = t / BASE;
        }
        assert!(carry == 0, "decimal multiplication overflow");
        out
    }

    /// Divides by a small integer, truncating toward zero.
    pub fn div_small(&self, d: u32) -> Decimal {
        assert!(d > 0, "division by zero");
        let mut out = self.clone();
        let mut rem = 0u64;
        for o in out.limbs.iter_mut().rev() {
            let cur = rem * BASE + *o as u64;
            *o = (cur / d as u64) as u32;
            rem = cur % d as u64;
        }
        out.truncate_padding();
        out
    }

    /// `floor(fraction · m)` for the fractional part only.
    ///
    /// `m` up to `2^32` keeps every intermediate inside `u64`.
    pub fn fraction_times_floor(&self, m: u64) -> u64 {
        assert!(m <= 1 << 32);
        let mut carry = 0u64;
        for &limb in self.frac() {
            let t = limb as u64 * m + carry;
            carry = t / BASE;
        }
        carry
    }

    /// Fractional part of `self · 10^k`: drops the integer part and the
    /// first `k` fractional digits, shifting the rest left.
    pub fn shift_fraction(&self, k: u32) -> Decimal {
        let n = frac_limbs(self.digits);
        let mut out = Decimal::zero(self.digits);
        let whole = (k / LIMB_DIGITS) as usize;
        let rest = k % LIMB_DIGITS;
        if whole >= n {
            return out;
        }
        out.limbs[whole..n].copy_from_slice(&self.limbs[..n - whole]);
        if rest > 0 {
            let m = POW10_U32[rest as usize] as u64;
            let mut carry = 0u64;
            for o in out.limbs[..n].iter_mut() {
                let t = *o as u64 * m + carry;
                *o = (t % BASE) as u32;
                carry = t / BASE;
            }
        }
        out
    }

    /// The fractional digits as a string of exactly `digits` characters.
    pub fn fraction_digits(&self) -> String {
        let mut s = String::with_capacity(self.frac().len() * 9);
        for limb in self.frac().iter().rev() {
            s.push_str(&format!("{:09}", limb));
        }
        s.truncate(self.digits as usize);
        s
    }

    /// Closest-ish `f64`, accurate to within a couple of ulps.
    pub fn to_f64(&self) -> f64 {
        let frac = self.frac();
        let mut v = 0.0f64;
        let mut scale = 1.0 / BASE as f64;
        for &limb in frac.iter().rev().take(3) {
            v += limb as f64 * scale;
            scale /= BASE as f64;
        }
        self.integer_part() as f64 + v
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_same_scale(other);
        self.limbs.iter().rev().cmp(other.limbs.iter().rev())
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Decimal {
    /// Shortest form: trailing zero digits are dropped, one is kept.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.fraction_digits();
        let trimmed = digits.trim_end_matches('0');
        let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
        write!(f, "{}.{}", self.integer_part(), trimmed)
    }
}

impl fmt::Debug for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Decimal({}, P={})", self, self.digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Decimal {
        Decimal::parse(s, 40).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(d("3.8").to_string(), "3.8");
        assert_eq!(d("0.232323").to_string(), "0.232323");
        assert_eq!(d("4").to_string(), "4.0");
        assert_eq!(d("0.000000000000000000000000000000000000001").to_string(),
            "0.000000000000000000000000000000000000001");
        assert!(Decimal::parse("1e5", 40).is_err());
        assert!(Decimal::parse("-0.5", 40).is_err());
        assert!(Decimal::parse("0.", 40).is_err());
        assert!(Decimal::parse(".5", 40).is_err());
        assert!(matches!(
            Decimal::parse("0.123", 2),
            Err(DecimalError::TooManyDigits { .. })
        ));
        // Trailing zeros beyond the digit count are harmless.
        assert_eq!(Decimal::parse("0.1200", 2).unwrap().to_string(), "0.12");
    }

    #[test]
    fn multiplication_truncates() {
        let p = 5;
        let a = Decimal::parse("0.33333", p).unwrap();
        let b = Decimal::parse("0.00003", p).unwrap();
        // exact 0.0000099999 -> 0.00000
        assert!(a.mul_trunc(&b).is_zero());
        let c = Decimal::parse("3.8", p).unwrap();
        let x = Decimal::parse("0.23232", p).unwrap();
        // 3.8 * 0.23232 = 0.882816 -> 0.88281
        assert_eq!(c.mul_trunc(&x).to_string(), "0.88281");
    }

    #[test]
    fn one_minus_and_sub() {
        assert_eq!(d("0.25").one_minus().unwrap().to_string(), "0.75");
        assert!(d("1.5").one_minus().is_none());
        assert_eq!(d("0.5").checked_sub(&d("0.2")).unwrap().to_string(), "0.3");
    }

    #[test]
    fn shift_fraction_examples() {
        assert_eq!(d("0.581234").shift_fraction(1).to_string(), "0.81234");
        assert_eq!(d("0.523674185238").shift_fraction(3).to_string(), "0.674185238");
        assert_eq!(d("0.44160905447136").shift_fraction(0).to_string(), "0.44160905447136");
        assert_eq!(d("0.1234567891234").shift_fraction(9).to_string(), "0.1234");
        assert!(d("0.123").shift_fraction(3).is_zero());
        assert!(d("0.5").shift_fraction(100).is_zero());
    }

    #[test]
    fn word32_round_trip() {
        for w in [0u32, 1, 2, 0x8000_0000, 0xffff_ffff, 1_896_683_947] {
            let v = Decimal::from_word32(w, 32);
            assert_eq!(v.fraction_times_floor(1 << 32), w as u64);
        }
        assert_eq!(Decimal::from_word32(0x8000_0000, 32).to_string(), "0.5");
    }

    #[test]
    fn div_small_truncates() {
        assert_eq!(d("0.6").div_small(256).to_string(), "0.00234375");
        let third = Decimal::parse("1", 5).unwrap().div_small(3);
        assert_eq!(third.to_string(), "0.33333");
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(d("0.2") < d("0.21"));
        assert!(d("1.0") > d("0.999999"));
        assert!(d("3.8") < d("4"));
    }

    fn digit_string(len: usize) -> impl Strategy<Value = String> {
        proptest::collection::vec(0u8..10, len).prop_map(|v| v.into_iter().map(|d| (b'0' + d) as char).collect())
    }

    proptest! {
        #[test]
        fn shift_is_a_digit_shift(digits in digit_string(64), k in 0u32..=32) {
            let x = Decimal::parse(&format!("0.{digits}"), 64).unwrap();
            let shifted = x.shift_fraction(k);
            let mut expected = digits[k as usize..].to_string();
            expected.extend(std::iter::repeat('0').take(k as usize));
            prop_assert_eq!(shifted.fraction_digits(), expected);
        }

        #[test]
        fn mul_matches_schoolbook_on_u128(a in 0u64..1_000_000_000_000, b in 0u64..1_000_000_000_000) {
            // 12-digit fractions multiplied at P = 12: floor(a*b / 10^12).
            let x = Decimal::parse(&format!("0.{a:012}"), 12).unwrap();
            let y = Decimal::parse(&format!("0.{b:012}"), 12).unwrap();
            let expected = (a as u128 * b as u128) / 1_000_000_000_000u128;
            prop_assert_eq!(x.mul_trunc(&y).fraction_digits(), format!("{expected:012}"));
        }

        #[test]
        fn add_sub_inverse(a in digit_string(37), b in digit_string(37)) {
            let x = Decimal::parse(&format!("0.{a}"), 37).unwrap();
            let y = Decimal::parse(&format!("0.{b}"), 37).unwrap();
            let s = x.add(&y);
            prop_assert_eq!(s.checked_sub(&y).unwrap(), x);
        }
    }
}
