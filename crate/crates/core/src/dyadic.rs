//! Exact dyadic rationals `num / 2^exp`.
//!
//! Every probability appearing in the walk operators is dyadic, so distances
//! and mixing bounds reduce to exact big-integer comparisons; no tolerance is
//! involved anywhere.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// `num / 2^exp`, not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u32) -> Self {
        Dyadic { num, exp }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    /// `2^-exp`.
    pub fn power_of_two(exp: u32) -> Self {
        Dyadic { num: BigInt::from(1), exp }
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic { num: a - b, exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic { num: a + b, exp }
    }

    /// Exact comparison by cross-shifting to a common denominator.
    pub fn cmp_exact(&self, other: &Dyadic) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        a.cmp(&b)
    }

    pub fn le(&self, other: &Dyadic) -> bool {
        self.cmp_exact(other) != Ordering::Greater
    }

    /// Lowest-terms form (odd numerator or zero).
    pub fn reduced(&self) -> Dyadic {
        if self.num.is_zero() {
            return Dyadic::zero();
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(u64::from(self.exp)) as u32;
        Dyadic { num: &self.num >> tz, exp: self.exp - tz }
    }

    pub fn to_f64(&self) -> f64 {
        // Adequate for display; all decisions use exact comparisons.
        let mut r = self.reduced();
        let mut scale = 1.0f64;
        while r.num.abs() > BigInt::from(u64::MAX) {
            r.num >>= 1;
            if r.exp > 0 {
                r.exp -= 1;
            } else {
                scale *= 2.0;
            }
        }
        let num_f = i128::try_from(r.num.clone()).map(|v| v as f64).unwrap_or(f64::NAN);
        num_f * scale / 2f64.powi(r.exp as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "{}/2^{}", r.num, r.exp)
    }
}

/// Equality of `a / 2^ea` and `b / 2^eb` given as raw parts.
pub fn dyadic_eq(a: &BigUint, ea: u32, b: &BigUint, eb: u32) -> bool {
    let e = ea.max(eb);
    (a << (e - ea)) == (b << (e - eb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_ordering() {
        let half = Dyadic::power_of_two(1);
        let quarter = Dyadic::power_of_two(2);
        assert_eq!(half.sub(&quarter), Dyadic::new(BigInt::from(1), 2));
        assert!(quarter < half);
        assert_eq!(half.add(&quarter).reduced(), Dyadic::new(BigInt::from(3), 2));
        // 2/4 equals 1/2 without reduction.
        assert_eq!(
            Dyadic::new(BigInt::from(2), 2).cmp_exact(&half),
            Ordering::Equal
        );
    }

    #[test]
    fn reduction_and_display() {
        let x = Dyadic::new(BigInt::from(12), 4);
        assert_eq!(x.reduced(), Dyadic::new(BigInt::from(3), 2));
        assert_eq!(format!("{x}"), "3/2^2");
        assert_eq!(x.to_f64(), 0.75);
    }

    #[test]
    fn raw_equality() {
        use num_traits::FromPrimitive;
        let a = BigUint::from_u64(4).unwrap();
        let b = BigUint::from_u64(1).unwrap();
        assert!(dyadic_eq(&a, 4, &b, 2));
        assert!(!dyadic_eq(&a, 4, &b, 3));
    }
}
