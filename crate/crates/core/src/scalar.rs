//! Numeric abstraction shared by every algorithm in the crate.
//!
//! Exact rationals are the default instantiation. Floating-point
//! instantiations exist for estimation work (Monte Carlo comparisons) and
//! replace exact zero tests by a small absolute tolerance.

use std::fmt;
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A field element usable as a probability weight.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed + Sum + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and `is_negligible` means `== 0`.
    const EXACT: bool;

    /// Whether the value should be treated as zero.
    fn is_negligible(&self) -> bool;

    fn from_rational(value: &BigRational) -> Self;

    /// Lossy conversion, used for sampling and display.
    fn to_f64(&self) -> f64;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn from_usize(value: usize) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(value)))
    }

    /// Strictly positive and not negligible.
    fn is_significant_positive(&self) -> bool {
        *self > Self::zero() && !self.is_negligible()
    }

    /// Strictly negative and not negligible.
    fn is_significant_negative(&self) -> bool {
        *self < Self::zero() && !self.is_negligible()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }

    /// `self -= a * b`, without cloning when the type allows.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.clone() - a.clone() * b.clone();
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-9
    }

    fn from_rational(value: &BigRational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_usize(value: usize) -> Self {
        FromPrimitive::from_usize(value).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-5
    }

    fn from_rational(value: &BigRational) -> Self {
        ToPrimitive::to_f32(value).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

/// Largest absolute difference between two equally long slices.
pub(crate) fn max_abs_diff<T: Scalar>(lhs: &[T], rhs: &[T]) -> T {
    lhs.iter()
        .zip(rhs)
        .map(|(a, b)| (a.clone() - b.clone()).abs())
        .fold(T::zero(), |acc, d| if d > acc { d } else { acc })
}

/// Sum of a slice of scalars.
pub(crate) fn total<T: Scalar>(values: &[T]) -> T {
    values.iter().cloned().sum()
}

pub(crate) fn is_one<T: Scalar>(value: &T) -> bool {
    (value.clone() - T::one()).is_negligible()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_zero_test_is_strict() {
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(10).pow(40));
        assert!(!tiny.is_negligible());
        assert!(tiny.is_significant_positive());
        assert!(BigRational::zero().is_negligible());
    }

    #[test]
    fn float_zero_test_uses_tolerance() {
        assert!(1e-12f64.is_negligible());
        assert!(!1e-3f64.is_negligible());
        assert!((0.1f64 + 0.2).approx_eq(&0.3));
    }

    #[test]
    fn from_ratio_agrees_across_scalars() {
        assert_eq!(
            BigRational::from_ratio(1, 6),
            BigRational::new(BigInt::from(1), BigInt::from(6))
        );
        assert!((f64::from_ratio(1, 6) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(f32::from_ratio(1, 2), 0.5);
    }
}
