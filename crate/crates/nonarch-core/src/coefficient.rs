//! Coefficient domains for truncated series.
//!
//! The field model is generic over the scalars sitting in front of powers of
//! the scale parameter. Two domains are provided:
//!
//! * [`num::BigRational`]: exact arithmetic, no rounding anywhere. Square
//!   roots exist only for perfect squares of rationals.
//! * [`f64`]: fast approximate arithmetic for experiments where exactness is
//!   not required. Coefficients below [`NEGLIGIBLE_F64`] are treated as
//!   accumulated underflow and dropped during canonicalization.

use num::bigint::Sign;
use num::{BigInt, BigRational, Signed, ToPrimitive};

/// Threshold below which a floating-point coefficient is considered an
/// artifact of underflow rather than data. The value sits far beneath any
/// quantity the experiments produce (their dynamic range stays within
/// roughly 1e-250 of unity) while still being representable as a normal
/// double, so genuine small terms survive canonicalization.
pub const NEGLIGIBLE_F64: f64 = 1e-300;

/// Scalar operations required of a coefficient domain.
///
/// Methods take references because the exact domain holds heap-allocated
/// big integers; cloning on every intermediate would dominate the cost of
/// series arithmetic.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug + std::fmt::Display {
    /// True when arithmetic in this domain is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    /// The fraction `num / den`. Callers guarantee `den != 0`; this is only
    /// used for literal constants such as binomial-series coefficients.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// Division. Callers guarantee `other` is nonzero.
    fn div(&self, other: &Self) -> Self;

    fn neg(&self) -> Self;

    /// Whether the value should be dropped when a series is canonicalized.
    /// Exact domains return true only for zero itself.
    fn is_negligible(&self) -> bool;

    /// Sign as -1, 0, or +1.
    fn sign(&self) -> i8;

    /// The exact square root if one exists in the domain. For the rational
    /// domain this requires numerator and denominator to be perfect squares;
    /// for floats any non-negative value has a (rounded) square root.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Closest double, for reporting and for handing values to numerical
    /// routines.
    fn to_f64(&self) -> f64;
}

impl Coefficient for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        debug_assert!(den != 0, "zero denominator in coefficient literal");
        num as f64 / den as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= NEGLIGIBLE_F64
    }

    fn sign(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coefficient for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        debug_assert!(den != 0, "zero denominator in coefficient literal");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn is_negligible(&self) -> bool {
        self.numer().sign() == Sign::NoSign
    }

    fn sign(&self) -> i8 {
        // `Ratio` keeps the denominator positive, so the numerator carries
        // the sign of the whole fraction.
        match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num_root = self.numer().sqrt();
        if &(&num_root * &num_root) != self.numer() {
            return None;
        }
        let den_root = self.denom().sqrt();
        if &(&den_root * &den_root) != self.denom() {
            return None;
        }
        Some(BigRational::new(num_root, den_root))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(num: i64, den: i64) -> BigRational {
        <BigRational as Coefficient>::from_ratio(num, den)
    }

    #[test]
    fn rational_sqrt_of_perfect_square() {
        assert_eq!(rat(4, 9).sqrt_exact(), Some(rat(2, 3)));
        assert_eq!(rat(0, 1).sqrt_exact(), Some(rat(0, 1)));
        assert_eq!(rat(144, 1).sqrt_exact(), Some(rat(12, 1)));
    }

    #[test]
    fn rational_sqrt_rejects_non_squares() {
        assert_eq!(rat(2, 1).sqrt_exact(), None);
        assert_eq!(rat(4, 3).sqrt_exact(), None);
        assert_eq!(rat(-4, 9).sqrt_exact(), None);
    }

    #[test]
    fn float_negligibility_threshold() {
        assert!(0.0_f64.is_negligible());
        assert!(1e-301_f64.is_negligible());
        assert!(!1e-299_f64.is_negligible());
        assert!(!1.0_f64.is_negligible());
    }

    #[test]
    fn signs() {
        assert_eq!(Coefficient::sign(&-3.5_f64), -1);
        assert_eq!(Coefficient::sign(&0.0_f64), 0);
        assert_eq!(Coefficient::sign(&rat(-7, 2)), -1);
        assert_eq!(Coefficient::sign(&rat(0, 5)), 0);
        assert_eq!(Coefficient::sign(&rat(1, 9)), 1);
    }
}
