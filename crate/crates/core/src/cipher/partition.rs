use crate::chaos::{Precision, RealValue};

use super::CipherError;

/// `S` equal cells over `[x_min, x_max)`, numbered from 1.
///
/// Cell `i` is `[bounds[i-1], bounds[i])`. In decimal mode the bounds are
/// `x_min + ⌊i·D/S⌋` with `D = x_max − x_min` truncated to `P` digits, so the
/// last bound is exactly `x_max` and lookup is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    bounds: Vec<RealValue>,
}

impl Partition {
    pub fn new(
        x_min: &RealValue,
        x_max: &RealValue,
        sites: u32,
    ) -> Result<Self, CipherError> {
        let invalid = |m: String| CipherError::Validation(vec![m]);
        if sites == 0 {
            return Err(invalid("S must be at least 1".into()));
        }
        if x_min.precision() != x_max.precision() {
            return Err(invalid("x_min and x_max use different precisions".into()));
        }
        let one = RealValue::parse("1", x_min.precision()).expect("literal");
        if x_min >= x_max || x_max > &one {
            return Err(invalid(format!(
                "need 0 <= x_min < x_max <= 1, got x_min = {x_min}, x_max = {x_max}"
            )));
        }
        let width = x_max.sub(x_min).expect("x_min < x_max");
        let mut bounds = Vec::with_capacity(sites as usize + 1);
        bounds.push(x_min.clone());
        for i in 1..sites {
            let offset = match x_min.precision() {
                Precision::Binary64 => width.div_small(sites).mul_small(i),
                Precision::Decimal(_) => width.mul_small(i).div_small(sites),
            };
            bounds.push(x_min.add(&offset));
        }
        bounds.push(x_max.clone());
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!(
                "{sites} sites over [{x_min}, {x_max}) are too narrow for {}",
                x_min.precision()
            )));
        }
        Ok(Partition { bounds })
    }

    pub fn sites(&self) -> u32 {
        self.bounds.len() as u32 - 1
    }

    pub fn precision(&self) -> Precision {
        self.bounds[0].precision()
    }

    /// The site containing `y`, or `None` outside `[x_min, x_max)`.
    pub fn site_of(&self, y: &RealValue) -> Option<u32> {
        let last = self.bounds.len() - 1;
        if *y < self.bounds[0] || *y >= self.bounds[last] {
            return None;
        }
        // First bound strictly above y; y lies in the cell ending there.
        Some(self.bounds.partition_point(|b| b <= y) as u32)
    }

    /// `(lower, upper)` of a site; `upper` of site `S` is `x_max`.
    pub fn site_bounds(&self, site: u32) -> Result<(RealValue, RealValue), CipherError> {
        if site == 0 || site > self.sites() {
            return Err(CipherError::IndexOutOfRange {
                site,
                sites: self.sites(),
            });
        }
        let i = site as usize;
        Ok((self.bounds[i - 1].clone(), self.bounds[i].clone()))
    }

    /// Nominal cell width `ε` as a double.
    pub fn epsilon(&self) -> f64 {
        let last = self.bounds.len() - 1;
        (self.bounds[last].to_f64() - self.bounds[0].to_f64()) / self.sites() as f64
    }

    pub fn x_min(&self) -> &RealValue {
        &self.bounds[0]
    }

    pub fn x_max(&self) -> &RealValue {
        &self.bounds[self.bounds.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hi_partition(p: Precision) -> Partition {
        let lo = RealValue::parse("0.2", p).unwrap();
        let hi = RealValue::parse("0.8", p).unwrap();
        Partition::new(&lo, &hi, 256).unwrap()
    }

    #[test]
    fn site_104() {
        for p in [Precision::Binary64, Precision::Decimal(32)] {
            let part = hi_partition(p);
            let y = RealValue::parse("0.44160905447136", p).unwrap();
            assert_eq!(part.site_of(&y), Some(104));
            let (lo, hi) = part.site_bounds(104).unwrap();
            assert!((lo.to_f64() - 0.44140625).abs() < 1e-15);
            assert!((hi.to_f64() - 0.44375).abs() < 1e-15);
            assert!((part.epsilon() - 0.00234375).abs() < 1e-15);
        }
        let (lo, hi) = hi_partition(Precision::Decimal(32)).site_bounds(104).unwrap();
        assert_eq!(lo.to_string(), "0.44140625");
        assert_eq!(hi.to_string(), "0.44375");
    }

    #[test]
    fn edges() {
        for p in [Precision::Binary64, Precision::Decimal(32)] {
            let part = hi_partition(p);
            assert_eq!(part.site_of(part.x_min()), Some(1));
            assert_eq!(part.site_of(part.x_max()), None);
            assert_eq!(part.site_of(&RealValue::parse("0.199", p).unwrap()), None);
            assert_eq!(part.site_bounds(256).unwrap().1, *part.x_max());
            assert!(matches!(part.site_bounds(0), Err(CipherError::IndexOutOfRange { .. })));
            assert!(matches!(part.site_bounds(257), Err(CipherError::IndexOutOfRange { .. })));
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let p = Precision::Binary64;
        let a = RealValue::parse("0.5", p).unwrap();
        let b = RealValue::parse("0.4", p).unwrap();
        assert!(Partition::new(&a, &b, 4).is_err());
        assert!(Partition::new(&b, &a, 0).is_err());
    }

    /// The largest value strictly below `v`.
    fn below(v: &RealValue) -> RealValue {
        match v {
            RealValue::Binary64(x) => RealValue::Binary64(f64::from_bits(x.to_bits() - 1)),
            RealValue::Decimal(d) => {
                let ulp = RealValue::Decimal(crate::decimal::Decimal::ulp(d.digits()));
                v.sub(&ulp).unwrap()
            }
        }
    }

    proptest! {
        #[test]
        fn cells_are_consistent(
            lo in 0u32..500, width in 1u32..500, sites in 1u32..=256, decimal in any::<bool>()
        ) {
            let p = if decimal { Precision::Decimal(32) } else { Precision::Binary64 };
            let x_min = RealValue::parse(&format!("0.{lo:03}"), p).unwrap();
            let x_max = RealValue::parse(&format!("0.{:03}", lo + width), p).unwrap();
            let part = Partition::new(&x_min, &x_max, sites).unwrap();
            for s in 1..=sites {
                let (l, u) = part.site_bounds(s).unwrap();
                prop_assert_eq!(part.site_of(&l), Some(s));
                prop_assert_eq!(part.site_of(&below(&u)), Some(s));
            }
        }
    }
}
