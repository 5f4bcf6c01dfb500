//! Complex values over the truncated field: pairs α + βi of real series.
//!
//! The arithmetic is the usual one with i² = -1. What the complex extension
//! gives up is the order: no total order can coexist with the ring
//! operations, because squares would have to be non-negative while i² = -1.
//! `compare` therefore always fails, and size questions go through
//! [`ComplexLaurent::modulus`] instead, which lands back in the ordered real
//! field.

use std::cmp::Ordering;
use std::fmt;

use crate::coefficient::Coefficient;
use crate::error::FieldError;
use crate::laurent::{Classification, Laurent, StandardPart};

/// A complex value α + βi with truncated-series components.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLaurent<C: Coefficient> {
    pub re: Laurent<C>,
    pub im: Laurent<C>,
}

impl<C: Coefficient> ComplexLaurent<C> {
    pub fn new(re: Laurent<C>, im: Laurent<C>) -> Self {
        ComplexLaurent { re, im }
    }

    pub fn from_real(re: Laurent<C>) -> Self {
        let trunc = re.truncation();
        ComplexLaurent {
            re,
            im: Laurent::zero_with_truncation(trunc),
        }
    }

    pub fn zero() -> Self {
        Self::from_real(Laurent::zero())
    }

    pub fn one() -> Self {
        Self::from_real(Laurent::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ComplexLaurent {
            re: Laurent::zero(),
            im: Laurent::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        ComplexLaurent {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexLaurent {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexLaurent {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexLaurent {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ComplexLaurent {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    /// α² + β², the squared modulus, as a real value.
    pub fn norm_squared(&self) -> Laurent<C> {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Inverse via the conjugate: 1/z = z̄ / (α² + β²).
    pub fn invert(&self) -> Result<Self, FieldError> {
        let denom = self.norm_squared().invert()?;
        let conj = self.conjugate();
        Ok(ComplexLaurent {
            re: conj.re.mul(&denom),
            im: conj.im.mul(&denom),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.invert()?))
    }

    /// Modulus √(α² + β²) as a real value.
    ///
    /// The square root always exists at the valuation level: each square has
    /// even valuation and a positive leading coefficient, and two positive
    /// leading coefficients cannot cancel, so α² + β² has even valuation
    /// min(2·val α, 2·val β). In the exact domain the leading coefficient
    /// must additionally be a rational square, e.g. |1 + i| = √2 is
    /// reported as [`FieldError::NotASquare`] rather than approximated.
    pub fn modulus(&self) -> Result<Laurent<C>, FieldError> {
        self.norm_squared().sqrt_positive()
    }

    /// Componentwise shadow (standard part of α, standard part of β).
    pub fn standard_part(&self) -> (StandardPart<C>, StandardPart<C>) {
        (self.re.standard_part(), self.im.standard_part())
    }

    /// Scale classification by the dominating component: the valuation of
    /// α + βi is min(val α, val β), since the components cannot cancel each
    /// other across the real/imaginary split.
    pub fn classify(&self) -> Result<Classification, FieldError> {
        match (self.re.valuation(), self.im.valuation()) {
            (None, None) => Err(FieldError::ZeroUnclassifiable),
            (Some(_), None) => self.re.classify(),
            (None, Some(_)) => self.im.classify(),
            (Some(a), Some(b)) => {
                if a <= b {
                    self.re.classify()
                } else {
                    self.im.classify()
                }
            }
        }
    }

    /// Always fails: a total order on the complex field would force the
    /// square i² = -1 to be non-negative.
    pub fn compare(&self, _other: &Self) -> Result<Ordering, FieldError> {
        Err(FieldError::Unordered)
    }
}

impl<C: Coefficient> fmt::Display for ComplexLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*i", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    type Cx = ComplexLaurent<BigRational>;
    type Re = Laurent<BigRational>;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Coefficient>::from_ratio(n, d)
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Cx::i();
        assert_eq!(i.mul(&i), Cx::one().neg());
    }

    #[test]
    fn conjugate_product_is_norm() {
        let z = Cx::new(Re::from_int(1), Re::rho());
        let n = z.mul(&z.conjugate());
        assert!(n.im.is_zero());
        assert_eq!(n.re, z.norm_squared());
    }

    #[test]
    fn inverse_of_i() {
        let inv = Cx::i().invert().unwrap();
        assert!(inv.re.is_zero());
        assert_eq!(inv.im.coeff(0), rat(-1, 1));
        assert_eq!(Cx::zero().invert(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn inverse_times_original() {
        let z = Cx::new(
            Re::from_terms([(0, rat(2, 1)), (1, rat(1, 1))]),
            Re::from_terms([(0, rat(-1, 1)), (2, rat(3, 1))]),
        );
        let w = z.invert().unwrap().mul(&z);
        assert_eq!(w.re.coeff(0), rat(1, 1));
        assert!(w
            .re
            .sub(&Re::one().truncated(w.re.truncation()))
            .is_zero());
        assert!(w.im.is_zero());
    }

    #[test]
    fn pythagorean_modulus() {
        let z = Cx::new(Re::from_int(3), Re::from_int(4));
        assert_eq!(z.modulus().unwrap().coeff(0), rat(5, 1));
    }

    #[test]
    fn modulus_valuation_is_even_when_components_differ() {
        // α = ρ, β = ρ^3: the squares meet at valuations 2 and 6 with
        // positive leads, so the norm has valuation 2 and |z| leads with ρ.
        let z = Cx::new(Re::rho(), Re::rho_power(3));
        let m = z.modulus().unwrap();
        assert_eq!(m.valuation(), Some(1));
        assert_eq!(m.coeff(1), rat(1, 1));
    }

    #[test]
    fn exact_modulus_demands_square_lead() {
        let z = Cx::new(Re::from_int(1), Re::from_int(1));
        assert!(matches!(z.modulus(), Err(FieldError::NotASquare(_))));
        // The float domain accepts the same value.
        let zf = ComplexLaurent::<f64>::new(Laurent::from_int(1), Laurent::from_int(1));
        let m = zf.modulus().unwrap();
        assert!((m.coeff(0) - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn classification_follows_dominating_component() {
        let z = Cx::new(Re::rho_power(2), Re::rho_power(-1));
        let c = z.classify().unwrap();
        assert_eq!(c.scale, crate::laurent::Scale::InfinitelyLarge);
        assert!(Cx::zero().classify().is_err());
        let w = Cx::new(Re::zero(), Re::rho());
        assert_eq!(
            w.classify().unwrap().scale,
            crate::laurent::Scale::Infinitesimal
        );
    }

    #[test]
    fn comparison_is_refused() {
        let z = Cx::one();
        assert_eq!(z.compare(&Cx::zero()), Err(FieldError::Unordered));
    }
}
