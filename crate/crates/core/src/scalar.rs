//! Coefficient rings.
//!
//! Every series, wall function, theta function and structure-constant table
//! is generic over its coefficient type. Anything that behaves like an
//! exact signed integer works: `i64`, `i128` and [`num_bigint::BigInt`]
//! are provided. Floating point types are deliberately not admitted since
//! wall-crossing relies on exact cancellation.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer coefficient ring.
pub trait Coefficient:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("coefficient type cannot represent an i64")
    }

    /// Parses a decimal literal with optional sign.
    fn parse_decimal(s: &str) -> Option<Self> {
        Self::from_str_radix(s.trim(), 10).ok()
    }

    /// Exact quotient, `None` when `den` does not divide `self`.
    fn exact_div(&self, den: &Self) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(den);
        r.is_zero().then_some(q)
    }
}

impl Coefficient for i64 {}
impl Coefficient for i128 {}
impl Coefficient for BigInt {}

/// Binomial-style helper: `sum += a * b` without cloning the accumulator.
pub(crate) fn add_product<C: Coefficient>(sum: &mut C, a: &C, b: &C) {
    let p = a.clone() * b.clone();
    let s = std::mem::replace(sum, C::zero());
    *sum = s + p;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division() {
        assert_eq!(12i64.exact_div(&4), Some(3));
        assert_eq!(12i64.exact_div(&5), None);
        assert_eq!((-12i64).exact_div(&4), Some(-3));
        assert_eq!(BigInt::from(7).exact_div(&BigInt::from(0)), None);
    }

    #[test]
    fn parse() {
        assert_eq!(i64::parse_decimal("-17"), Some(-17));
        assert_eq!(
            BigInt::parse_decimal("123456789012345678901234567890"),
            Some("123456789012345678901234567890".parse().unwrap())
        );
        assert_eq!(i128::parse_decimal("x"), None);
    }
}
