//! Rational functions P(x)/Q(x) and their order embedding into the field.
//!
//! Substituting x = 1/ρ sends a rational function to a truncated Laurent
//! series, and because ρ is a positive infinitesimal the substitution reads
//! "x is a fixed infinitely large number". The order on rational functions
//! by eventual sign at +∞ is exactly the order the image carries in the
//! field, which is what makes this an order embedding and not merely a ring
//! map.

use std::cmp::Ordering;
use std::fmt;

use crate::coefficient::Coefficient;
use crate::error::FieldError;
use crate::laurent::Laurent;

/// A rational function with polynomial numerator and denominator, stored as
/// coefficient vectors in ascending degree.
///
/// Canonical form: no trailing negligible coefficients, denominator leading
/// coefficient positive, zero represented as 0/1, and (in the exact domain)
/// numerator and denominator coprime.
#[derive(Debug, Clone)]
pub struct RationalFunction<C: Coefficient> {
    num: Vec<C>,
    den: Vec<C>,
}

fn strip<C: Coefficient>(p: &mut Vec<C>) {
    while p.last().is_some_and(|c| c.is_negligible()) {
        p.pop();
    }
}

fn poly_mul<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    strip(&mut out);
    out
}

fn poly_add<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    let mut out: Vec<C> = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).cloned().unwrap_or_else(C::zero);
        let y = b.get(i).cloned().unwrap_or_else(C::zero);
        out.push(x.add(&y));
    }
    strip(&mut out);
    out
}

fn poly_neg<C: Coefficient>(a: &[C]) -> Vec<C> {
    a.iter().map(|c| c.neg()).collect()
}

fn poly_eq<C: Coefficient>(a: &[C], b: &[C]) -> bool {
    let diff = poly_add(a, &poly_neg(b));
    diff.is_empty()
}

/// Quotient and remainder of a by b (b nonzero, stripped). Exact-domain
/// helper: each elimination step cancels the top coefficient exactly.
fn poly_divmod<C: Coefficient>(a: &[C], b: &[C]) -> (Vec<C>, Vec<C>) {
    let db = b.len() - 1;
    let mut rem: Vec<C> = a.to_vec();
    strip(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![C::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let factor = rem[da].div(&b[db]);
        quot[da - db] = factor.clone();
        for i in 0..=db {
            let t = b[i].mul(&factor);
            rem[i + da - db] = rem[i + da - db].sub(&t);
        }
        rem.truncate(da);
        strip(&mut rem);
    }
    strip(&mut quot);
    (quot, rem)
}

/// Monic polynomial gcd by the Euclidean algorithm (exact domain only).
fn poly_gcd<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    strip(&mut x);
    strip(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c = c.div(&lead);
        }
    }
    x
}

impl<C: Coefficient> RationalFunction<C> {
    /// Build P/Q from coefficient vectors in ascending degree. A vanishing
    /// denominator is rejected.
    pub fn new(num: Vec<C>, den: Vec<C>) -> Result<Self, FieldError> {
        let mut out = RationalFunction { num, den };
        strip(&mut out.num);
        strip(&mut out.den);
        if out.den.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        out.canonicalize();
        Ok(out)
    }

    /// The polynomial P/1.
    pub fn polynomial(num: Vec<C>) -> Self {
        Self::new(num, vec![C::one()]).expect("unit denominator")
    }

    /// The indeterminate x.
    pub fn x() -> Self {
        Self::polynomial(vec![C::zero(), C::one()])
    }

    pub fn constant(c: C) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn zero() -> Self {
        Self::polynomial(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    fn canonicalize(&mut self) {
        if self.num.is_empty() {
            self.den = vec![C::one()];
            return;
        }
        if C::EXACT {
            let g = poly_gcd(&self.num, &self.den);
            if g.len() > 1 {
                self.num = poly_divmod(&self.num, &g).0;
                self.den = poly_divmod(&self.den, &g).0;
            }
        }
        if self.den.last().map(|c| c.sign()) == Some(-1) {
            self.num = poly_neg(&self.num);
            self.den = poly_neg(&self.den);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numerator(&self) -> &[C] {
        &self.num
    }

    pub fn denominator(&self) -> &[C] {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = poly_add(
            &poly_mul(&self.num, &other.den),
            &poly_mul(&other.num, &self.den),
        );
        let den = poly_mul(&self.den, &other.den);
        Self::new(num, den).expect("nonzero denominator product")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: poly_neg(&self.num),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            poly_mul(&self.num, &other.num),
            poly_mul(&self.den, &other.den),
        )
        .expect("nonzero denominator product")
    }

    pub fn invert(&self) -> Result<Self, FieldError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.invert()?))
    }

    /// Sign by eventual behaviour at +∞: the sign of the ratio of leading
    /// coefficients.
    pub fn sign(&self) -> i8 {
        match (self.num.last(), self.den.last()) {
            (Some(p), Some(q)) => p.sign() * q.sign(),
            _ => 0,
        }
    }

    /// Order by eventual sign at +∞. Under the embedding x = 1/ρ this is
    /// precisely the field order of the images.
    pub fn compare(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Evaluate at a point of the coefficient domain; `None` where the
    /// denominator vanishes.
    pub fn evaluate(&self, x: &C) -> Option<C> {
        let horner = |p: &[C]| {
            let mut acc = C::zero();
            for c in p.iter().rev() {
                acc = acc.mul(x).add(c);
            }
            acc
        };
        let d = horner(&self.den);
        if d.is_negligible() {
            return None;
        }
        Some(horner(&self.num).div(&d))
    }

    /// Image under x ↦ 1/ρ as a series certified through `trunc`.
    ///
    /// With P of degree dp and Q of degree dq, P(1/ρ)/Q(1/ρ) equals
    /// ρ^(dq-dp) · rev(P)(ρ)/rev(Q)(ρ) where rev reverses the coefficient
    /// order; rev(Q) has a nonzero constant term, so ordinary power-series
    /// long division
    ///
    ///   cₖ = (pₖ - Σ_{j<k} cⱼ q_{k-j}) / q₀
    ///
    /// produces the expansion. The map is exact, so the window is whatever
    /// the caller asks for.
    pub fn to_laurent(&self, trunc: i64) -> Laurent<C> {
        if self.is_zero() {
            return Laurent::zero_with_truncation(trunc);
        }
        let dp = (self.num.len() - 1) as i64;
        let dq = (self.den.len() - 1) as i64;
        let offset = dq - dp;
        let steps = trunc - offset;
        if steps < 0 {
            return Laurent::zero_with_truncation(trunc);
        }
        let rev = |p: &[C], k: i64| -> C {
            let d = p.len() as i64 - 1;
            if k <= d {
                p[(d - k) as usize].clone()
            } else {
                C::zero()
            }
        };
        let q0 = rev(&self.den, 0);
        let mut c: Vec<C> = Vec::with_capacity(steps as usize + 1);
        for k in 0..=steps {
            let mut acc = rev(&self.num, k);
            for (j, cj) in c.iter().enumerate() {
                acc = acc.sub(&cj.mul(&rev(&self.den, k - j as i64)));
            }
            c.push(acc.div(&q0));
        }
        Laurent::from_terms_with_truncation(
            c.into_iter().enumerate().map(|(k, ck)| (offset + k as i64, ck)),
            trunc,
        )
    }
}

impl<C: Coefficient> PartialEq for RationalFunction<C> {
    /// Semantic equality by cross-multiplication, independent of the chosen
    /// representative.
    fn eq(&self, other: &Self) -> bool {
        poly_eq(
            &poly_mul(&self.num, &other.den),
            &poly_mul(&other.num, &self.den),
        )
    }
}

fn render_poly<C: Coefficient>(p: &[C]) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (k, c) in p.iter().enumerate() {
        if c.is_negligible() {
            continue;
        }
        let (mag, negative) = if c.sign() < 0 {
            (c.neg(), true)
        } else {
            (c.clone(), false)
        };
        if first {
            if negative {
                out.push('-');
            }
            first = false;
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if k == 0 {
            out.push_str(&format!("{mag}"));
        } else {
            out.push_str(&format!("{mag}*x^{k}"));
        }
    }
    out
}

impl<C: Coefficient> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 && self.den[0] == C::one() {
            f.write_str(&render_poly(&self.num))
        } else {
            write!(f, "({}) / ({})", render_poly(&self.num), render_poly(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::DEFAULT_TRUNCATION;
    use num::BigRational;

    type R = RationalFunction<BigRational>;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Coefficient>::from_ratio(n, d)
    }

    fn poly(coeffs: &[i64]) -> R {
        R::polynomial(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn common_factors_cancel() {
        // (x^2 - 1)/(x - 1) reduces to x + 1.
        let f = R::new(
            vec![rat(-1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(-1, 1), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(f.numerator(), poly(&[1, 1]).numerator());
        assert_eq!(f.denominator(), &[rat(1, 1)]);
    }

    #[test]
    fn partial_fraction_identity() {
        // 1/(x-1) + 1/(x+1) = 2x/(x^2 - 1)
        let a = R::new(vec![rat(1, 1)], vec![rat(-1, 1), rat(1, 1)]).unwrap();
        let b = R::new(vec![rat(1, 1)], vec![rat(1, 1), rat(1, 1)]).unwrap();
        let sum = a.add(&b);
        let expected = R::new(
            vec![rat(0, 1), rat(2, 1)],
            vec![rat(-1, 1), rat(0, 1), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(sum, expected);
    }

    #[test]
    fn x_embeds_as_inverse_rho() {
        let image = R::x().to_laurent(DEFAULT_TRUNCATION);
        assert_eq!(image, Laurent::rho_power(-1));
    }

    #[test]
    fn geometric_series_from_simple_pole() {
        // 1/(1+x) at x = 1/ρ is ρ - ρ^2 + ρ^3 - ...
        let f = R::new(vec![rat(1, 1)], vec![rat(1, 1), rat(1, 1)]).unwrap();
        let image = f.to_laurent(6);
        for k in 1..=6 {
            let want = if k % 2 == 1 { rat(1, 1) } else { rat(-1, 1) };
            assert_eq!(image.coeff(k), want, "coefficient of rho^{k}");
        }
        assert_eq!(image.coeff(0), rat(0, 1));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f = R::new(vec![rat(1, 1), rat(2, 1)], vec![rat(1, 1), rat(0, 1), rat(3, 1)]).unwrap();
        let g = poly(&[0, 1, 1]);
        let k = DEFAULT_TRUNCATION;
        let lhs = f.add(&g).to_laurent(k);
        let rhs = f.to_laurent(k).add(&g.to_laurent(k));
        assert_eq!(lhs, rhs.truncated(lhs.truncation()));
        let lhs = f.mul(&g).to_laurent(k);
        let rhs = f.to_laurent(k).mul(&g.to_laurent(k));
        assert_eq!(lhs.truncated(rhs.truncation()), rhs);
    }

    #[test]
    fn order_matches_eventual_sign() {
        // x^2 eventually dominates 1000x.
        let big = poly(&[0, 0, 1]);
        let small = poly(&[0, 1000]);
        assert_eq!(big.compare(&small), Ordering::Greater);
        // 1/x is positive but below every positive constant.
        let tiny = R::new(vec![rat(1, 1)], vec![rat(0, 1), rat(1, 1)]).unwrap();
        assert_eq!(tiny.sign(), 1);
        assert_eq!(tiny.compare(&R::constant(rat(1, 1000000))), Ordering::Less);
        assert_eq!(tiny.compare(&R::zero()), Ordering::Greater);
    }

    #[test]
    fn order_agrees_with_field_order_after_embedding() {
        let k = DEFAULT_TRUNCATION;
        let pairs = [
            (poly(&[0, 0, 1]), poly(&[0, 1000])),
            (poly(&[5]), poly(&[-3, 1])),
            (
                R::new(vec![rat(1, 1)], vec![rat(0, 1), rat(1, 1)]).unwrap(),
                R::constant(rat(1, 7)),
            ),
        ];
        for (f, g) in pairs {
            assert_eq!(
                f.compare(&g),
                f.to_laurent(k).compare(&g.to_laurent(k)),
                "{f} vs {g}"
            );
        }
    }

    #[test]
    fn evaluation_matches_arithmetic() {
        let f = R::new(vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(1, 1)]).unwrap();
        assert_eq!(f.evaluate(&rat(3, 1)), Some(rat(4, 5)));
        assert_eq!(f.evaluate(&rat(-2, 1)), None);
    }

    #[test]
    fn display_reduced_form() {
        let f = R::new(
            vec![rat(-1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(-1, 1), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(format!("{f}"), "1 + 1*x^1");
    }
}
