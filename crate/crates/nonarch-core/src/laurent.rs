//! Truncated Laurent series in the scale parameter ρ.
//!
//! A value is a finite sum Σ aₖ ρᵏ with integer exponents, stored sparsely,
//! together with a certification exponent `trunc`: the coefficients are
//! correct for every k ≤ trunc and unknown beyond it. ρ is a positive
//! infinitesimal, so small exponents dominate: the leading (lowest-exponent)
//! term decides sign, ordering, and scale.
//!
//! Every operation tracks how far its result stays certified. Addition keeps
//! the smaller window; multiplication by a value of valuation m shifts the
//! partner's window by m; inversion of a value of valuation m costs 2m
//! exponents; square roots at valuation 2q cost q. The bookkeeping is what
//! makes the arithmetic honest rather than merely plausible: a coefficient
//! outside the window is never reported.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::coefficient::Coefficient;
use crate::error::FieldError;

/// Default certification exponent for freshly constructed values.
///
/// Sixteen certified powers of ρ is comfortably more than any experiment in
/// this workspace consumes; the deepest chains (inversion after
/// multiplication) spend at most a handful of exponents.
pub const DEFAULT_TRUNCATION: i64 = 16;

/// A truncated Laurent series Σ aₖ ρᵏ over the coefficient domain `C`.
///
/// Canonical form: no stored coefficient is negligible and no stored
/// exponent exceeds the certification window. Zero is the empty sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent<C: Coefficient> {
    terms: BTreeMap<i64, C>,
    trunc: i64,
}

/// The standard part of a value: its shadow in the real (coefficient)
/// domain. Finite for valuation ≥ 0, a signed infinity otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum StandardPart<C> {
    Finite(C),
    PlusInfinity,
    MinusInfinity,
}

impl<C: fmt::Display> fmt::Display for StandardPart<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardPart::Finite(c) => write!(f, "{c}"),
            StandardPart::PlusInfinity => write!(f, "+inf"),
            StandardPart::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// Coarse size of a nonzero value, read off its valuation m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// m ≥ 1: smaller in magnitude than every positive real.
    Infinitesimal,
    /// m = 0: finite with a nonzero shadow.
    FiniteAppreciable,
    /// m ≤ -1: larger in magnitude than every real.
    InfinitelyLarge,
}

/// Finer placement relative to powers of ρ itself.
///
/// In this representation every nonzero value has a leading exponent m, so
/// its magnitude is pinned between ρ^(m+1) and ρ^(m-1). Consequences, each a
/// one-line valuation argument:
///
/// * ρ-null (below ρⁿ for all n) is impossible for nonzero values, since
///   |x| > ρ^(m+1); only zero is null, and zero is rejected by `classify`.
/// * every nonzero value is ρ-moderate, since |x| < ρ^(m-1) ≤ ρ^(-n) for
///   n ≥ 1 - m.
/// * "finite but not comparable to any ρ power" cannot occur, because a
///   leading exponent always exists; the variant is kept so that the type
///   states the full classification rather than the inhabited corner of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoClass {
    /// Smaller than every power of ρ. Carried by zero alone, which
    /// `classify` reports as an error instead; never produced here.
    RhoNull,
    /// m ≥ 1: vanishes at least as fast as ρ.
    RhoInfinitesimalProper,
    /// m = 0: bounded between positive constants.
    RhoConstant,
    /// Finite without being infinitesimal-or-constant scale. Uninhabited in
    /// this representation (see the type-level notes above).
    RhoFiniteOnly,
    /// m ≤ -1: moderate (below some ρ⁻ⁿ) but not finite.
    RhoModerateOnly,
}

/// Joint coarse/fine classification of a nonzero value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub scale: Scale,
    pub rho: RhoClass,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scale::Infinitesimal => "infinitesimal",
            Scale::FiniteAppreciable => "finite appreciable",
            Scale::InfinitelyLarge => "infinitely large",
        };
        f.write_str(s)
    }
}

impl fmt::Display for RhoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RhoClass::RhoNull => "rho-null",
            RhoClass::RhoInfinitesimalProper => "rho-infinitesimal",
            RhoClass::RhoConstant => "rho-constant scale",
            RhoClass::RhoFiniteOnly => "rho-finite only",
            RhoClass::RhoModerateOnly => "rho-moderate only",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.scale, self.rho)
    }
}

impl<C: Coefficient> Laurent<C> {
    // ── construction ──

    pub fn zero() -> Self {
        Self::zero_with_truncation(DEFAULT_TRUNCATION)
    }

    pub fn zero_with_truncation(trunc: i64) -> Self {
        Laurent {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// The scale parameter ρ itself.
    pub fn rho() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// ρᵏ for any integer k.
    pub fn rho_power(k: i64) -> Self {
        Self::monomial(C::one(), k)
    }

    pub fn monomial(coeff: C, exp: i64) -> Self {
        Self::from_terms_with_truncation([(exp, coeff)], DEFAULT_TRUNCATION)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(C::from_ratio(num, den))
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        Self::from_terms_with_truncation(pairs, DEFAULT_TRUNCATION)
    }

    /// Build from (exponent, coefficient) pairs. Repeated exponents are
    /// summed; anything negligible or beyond the window is dropped.
    pub fn from_terms_with_truncation(
        pairs: impl IntoIterator<Item = (i64, C)>,
        trunc: i64,
    ) -> Self {
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (exp, coeff) in pairs {
            terms
                .entry(exp)
                .and_modify(|c| *c = c.add(&coeff))
                .or_insert(coeff);
        }
        let mut out = Laurent { terms, trunc };
        out.canonicalize();
        out
    }

    fn canonicalize(&mut self) {
        let trunc = self.trunc;
        self.terms.retain(|exp, coeff| *exp <= trunc && !coeff.is_negligible());
    }

    // ── inspection ──

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Certification exponent: coefficients at exponents ≤ this are exact
    /// statements about the value, coefficients beyond it are unknown.
    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    /// Leading exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Valuation for truncation bookkeeping, where zero counts as "nothing
    /// seen through the window": one past the certification exponent.
    fn bookkeeping_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.trunc + 1)
    }

    /// Coefficient at exponent k (zero when absent).
    pub fn coeff(&self, k: i64) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    /// Sign of the value: the sign of its leading coefficient, 0 for zero.
    /// Leading-term dominance makes this the sign in the ordered field, not
    /// just a convention.
    pub fn sign(&self) -> i8 {
        self.leading().map(|(_, c)| c.sign()).unwrap_or(0)
    }

    /// Restrict to a smaller window, discarding terms above it. Widening is
    /// impossible: certification can only be spent.
    pub fn truncated(&self, trunc: i64) -> Self {
        let mut out = self.clone();
        out.trunc = out.trunc.min(trunc);
        out.canonicalize();
        out
    }

    // ── ring operations ──

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut terms = self.terms.clone();
        for (exp, coeff) in &other.terms {
            terms
                .entry(*exp)
                .and_modify(|c| *c = c.add(coeff))
                .or_insert_with(|| coeff.clone());
        }
        let mut out = Laurent { terms, trunc };
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, c.neg())).collect();
        Laurent {
            terms,
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product. An unknown tail of `other` starting at exponent Kb + 1 meets
    /// the leading term of `self` at exponent m(self) + Kb + 1, and
    /// symmetrically, so the result is certified through
    /// min(Ka + m(other), Kb + m(self)).
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = (self.trunc + other.bookkeeping_valuation())
            .min(other.trunc + self.bookkeeping_valuation());
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let exp = ka + kb;
                if exp > trunc {
                    continue;
                }
                let prod = ca.mul(cb);
                terms
                    .entry(exp)
                    .and_modify(|c| *c = c.add(&prod))
                    .or_insert(prod);
            }
        }
        let mut out = Laurent { terms, trunc };
        out.canonicalize();
        out
    }

    /// Multiply by an exact scalar. The scalar carries no uncertainty, so
    /// the window is unchanged.
    pub fn scale_by(&self, c: &C) -> Self {
        let terms = self.terms.iter().map(|(k, a)| (*k, a.mul(c))).collect();
        let mut out = Laurent {
            terms,
            trunc: self.trunc,
        };
        out.canonicalize();
        out
    }

    /// Multiply by the exact monomial ρᵏ: exponents and window both shift.
    pub fn shift(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect();
        Laurent {
            terms,
            trunc: self.trunc + k,
        }
    }

    /// Multiplicative inverse.
    ///
    /// Writing the value as Σ_{k≥m} aₖ ρᵏ with a_m ≠ 0, the inverse
    /// h = Σ_{n≥-m} hₙ ρⁿ satisfies h₋ₘ = 1/aₘ and, matching the ρᵗ
    /// coefficient of x·h = 1 for t ≥ 1,
    ///
    ///   h_{t-m} = -(1/aₘ) Σ_{j=1..t} a_{m+j} h_{t-m-j}.
    ///
    /// An unknown tail of x at exponent K+1 perturbs the inverse at exponent
    /// K+1-2m, so the result is certified through K - 2m. Inverting an
    /// infinitesimal therefore spends window; inverting an infinitely large
    /// value earns it back.
    pub fn invert(&self) -> Result<Self, FieldError> {
        let m = match self.valuation() {
            Some(m) => m,
            None => return Err(FieldError::DivisionByZero),
        };
        let lead = self.coeff(m);
        let trunc = self.trunc - 2 * m;
        // h indexed by offset t: h[t] is the coefficient of ρ^(t - m).
        // Offsets run 0..=(trunc + m) so that t - m reaches the window edge.
        let steps = trunc + m;
        let mut h: Vec<C> = Vec::new();
        if steps >= 0 {
            h.push(C::one().div(&lead));
        }
        for t in 1..=steps {
            let mut acc = C::zero();
            for j in 1..=t {
                let a = self.coeff(m + j);
                if a.is_negligible() {
                    continue;
                }
                acc = acc.add(&a.mul(&h[(t - j) as usize]));
            }
            h.push(acc.neg().div(&lead));
        }
        Ok(Self::from_terms_with_truncation(
            h.into_iter().enumerate().map(|(t, c)| (t as i64 - m, c)),
            trunc,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.invert()?))
    }

    /// Integer power. Negative exponents invert first; x⁰ is 1 certified
    /// through x's own window.
    pub fn pow(&self, k: i64) -> Result<Self, FieldError> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        let mut acc = Self::one().truncated(self.trunc);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Square root of a positive value (zero is allowed and fixed).
    ///
    /// Requirements mirror the structure of the field: the valuation must be
    /// even (ρ has no square root, since half-integer exponents are not in
    /// the model), the leading coefficient must be positive, and in the
    /// exact domain it must itself be a rational square.
    ///
    /// With x = ρ^{2q} Σ_{k≥0} wₖ ρᵏ, the root s = ρ^q Σ sₖ ρᵏ follows from
    /// matching coefficients in s² = w:
    ///
    ///   s₀ = √w₀,   sₜ = (wₜ - Σ_{i=1..t-1} sᵢ s_{t-i}) / (2 s₀).
    ///
    /// A tail of x at exponent K+1 moves the root at exponent K+1-q, so the
    /// result is certified through K - q.
    pub fn sqrt_positive(&self) -> Result<Self, FieldError> {
        let v = match self.valuation() {
            Some(v) => v,
            None => return Ok(self.clone()),
        };
        if v % 2 != 0 {
            return Err(FieldError::OddValuation(v));
        }
        let lead = self.coeff(v);
        if lead.sign() < 0 {
            return Err(FieldError::NotPositive);
        }
        let s0 = match lead.sqrt_exact() {
            Some(s0) => s0,
            None => return Err(FieldError::NotASquare(format!("{lead}"))),
        };
        let q = v / 2;
        let trunc = self.trunc - q;
        // sₜ is the coefficient of ρ^(q + t); offsets run through the
        // relative window K - 2q.
        let steps = self.trunc - 2 * q;
        let two_s0 = s0.add(&s0);
        let mut s: Vec<C> = vec![s0];
        for t in 1..=steps {
            let mut acc = self.coeff(v + t);
            for i in 1..t {
                acc = acc.sub(&s[i as usize].mul(&s[(t - i) as usize]));
            }
            s.push(acc.div(&two_s0));
        }
        Ok(Self::from_terms_with_truncation(
            s.into_iter().enumerate().map(|(t, c)| (q + t as i64, c)),
            trunc,
        ))
    }

    // ── order and asymptotic structure ──

    /// Total order of the real-coefficient field: compare leading terms of
    /// the difference. Valid through the smaller of the two windows; values
    /// agreeing on every certified coefficient compare equal.
    pub fn compare(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Absolute value in the field order.
    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Shadow of the value in the coefficient domain: the ρ⁰ coefficient
    /// for finite values, a signed infinity when the valuation is negative.
    pub fn standard_part(&self) -> StandardPart<C> {
        match self.valuation() {
            Some(v) if v < 0 => {
                if self.sign() > 0 {
                    StandardPart::PlusInfinity
                } else {
                    StandardPart::MinusInfinity
                }
            }
            _ => StandardPart::Finite(self.coeff(0)),
        }
    }

    /// Split a finite value as (shadow, infinitesimal remainder). Fails for
    /// infinitely large values, which have no such decomposition.
    pub fn asymptotic_split(&self) -> Result<(C, Self), FieldError> {
        if matches!(self.valuation(), Some(v) if v < 0) {
            return Err(FieldError::InfinitelyLarge);
        }
        let shadow = self.coeff(0);
        let mut rest = self.clone();
        rest.terms.remove(&0);
        Ok((shadow, rest))
    }

    /// Classify a nonzero value by its valuation m. Zero belongs to every
    /// null class at once, so it is rejected rather than forced into one.
    pub fn classify(&self) -> Result<Classification, FieldError> {
        let m = self.valuation().ok_or(FieldError::ZeroUnclassifiable)?;
        let (scale, rho) = if m >= 1 {
            (Scale::Infinitesimal, RhoClass::RhoInfinitesimalProper)
        } else if m == 0 {
            (Scale::FiniteAppreciable, RhoClass::RhoConstant)
        } else {
            (Scale::InfinitelyLarge, RhoClass::RhoModerateOnly)
        };
        Ok(Classification { scale, rho })
    }

    // ── rendering ──

    /// Human-readable form, e.g. `3 + 1*r^1 - 2*r^2`, with `r` standing for
    /// ρ. The output reparses to an equal value under the expression grammar
    /// used by the command-line tools (rational coefficients print as `p/q`,
    /// read back as a division).
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            let (mag, negative) = if coeff.sign() < 0 {
                (coeff.neg(), true)
            } else {
                (coeff.clone(), false)
            };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if *exp == 0 {
                out.push_str(&format!("{mag}"));
            } else {
                out.push_str(&format!("{mag}*r^{exp}"));
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    type Exact = Laurent<BigRational>;
    type Float = Laurent<f64>;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Coefficient>::from_ratio(n, d)
    }

    #[test]
    fn construction_canonicalizes() {
        let x = Float::from_terms([(2, 1.0), (2, -1.0), (0, 3.0)]);
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.coeff(2), 0.0);
        assert!(Float::from_terms([(1, 0.0)]).is_zero());
    }

    #[test]
    fn terms_beyond_window_are_dropped() {
        let x = Float::from_terms_with_truncation([(0, 1.0), (5, 2.0)], 4);
        assert_eq!(x.coeff(5), 0.0);
        assert_eq!(x.truncation(), 4);
    }

    #[test]
    fn product_of_conjugate_like_factors() {
        // (1 + r)(1 - r + r^2) = 1 + r^3
        let a = Exact::from_terms([(0, rat(1, 1)), (1, rat(1, 1))]);
        let b = Exact::from_terms([(0, rat(1, 1)), (1, rat(-1, 1)), (2, rat(1, 1))]);
        let expected = Exact::from_terms([(0, rat(1, 1)), (3, rat(1, 1))]);
        assert_eq!(a.mul(&b), expected);
    }

    #[test]
    fn addition_keeps_smaller_window() {
        let a = Float::from_terms_with_truncation([(0, 1.0)], 10);
        let b = Float::from_terms_with_truncation([(1, 2.0)], 6);
        assert_eq!(a.add(&b).truncation(), 6);
    }

    #[test]
    fn product_window_shifts_by_valuation() {
        let a = Float::from_terms_with_truncation([(2, 1.0)], 16);
        let b = Float::from_terms_with_truncation([(3, 5.0)], 16);
        // Unknown tail of b beyond 16 meets leading ρ^2 of a at exponent 19,
        // so the product is certified through 18.
        assert_eq!(a.mul(&b).truncation(), 18);
    }

    #[test]
    fn inverse_of_scaled_monomial() {
        let x = Exact::monomial(rat(2, 1), 2);
        let inv = x.invert().unwrap();
        assert_eq!(inv, Exact::monomial(rat(1, 2), -2).truncated(12));
        assert_eq!(inv.truncation(), DEFAULT_TRUNCATION - 4);
    }

    #[test]
    fn inverse_times_original_is_one() {
        let x = Exact::from_terms([(0, rat(1, 1)), (1, rat(1, 1))]);
        let prod = x.invert().unwrap().mul(&x);
        assert_eq!(prod, Exact::one().truncated(prod.truncation()));
        // Inverting at valuation 0 is free: the window survives intact.
        assert_eq!(prod.truncation(), DEFAULT_TRUNCATION);
    }

    #[test]
    fn inverse_of_infinitely_large_regains_window() {
        let x = Float::from_terms([(-3, 2.0), (0, 1.0)]);
        let inv = x.invert().unwrap();
        assert_eq!(inv.truncation(), DEFAULT_TRUNCATION + 6);
        let prod = inv.mul(&x);
        assert_eq!(prod.coeff(0), 1.0);
        assert!(prod.sub(&Float::one().truncated(prod.truncation())).is_zero());
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(Float::zero().invert(), Err(FieldError::DivisionByZero));
        assert_eq!(
            Float::one().div(&Float::zero()),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn sqrt_of_one_plus_rho() {
        let x = Exact::from_terms([(0, rat(1, 1)), (1, rat(1, 1))]);
        let s = x.sqrt_positive().unwrap();
        assert_eq!(s.coeff(0), rat(1, 1));
        assert_eq!(s.coeff(1), rat(1, 2));
        assert_eq!(s.coeff(2), rat(-1, 8));
        assert_eq!(s.coeff(3), rat(1, 16));
        assert_eq!(s.coeff(4), rat(-5, 128));
        assert_eq!(s.truncation(), DEFAULT_TRUNCATION);
        let sq = s.mul(&s);
        assert_eq!(sq, x.truncated(sq.truncation()));
    }

    #[test]
    fn sqrt_failure_modes() {
        assert_eq!(
            Exact::rho().sqrt_positive(),
            Err(FieldError::OddValuation(1))
        );
        assert_eq!(
            Exact::from_int(-4).sqrt_positive(),
            Err(FieldError::NotPositive)
        );
        assert!(matches!(
            Exact::from_int(2).sqrt_positive(),
            Err(FieldError::NotASquare(_))
        ));
        // The float domain has no exactness requirement.
        let s = Float::constant(2.0).sqrt_positive().unwrap();
        assert!((s.coeff(0) - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sqrt_at_negative_even_valuation() {
        let x = Exact::monomial(rat(9, 1), -4);
        let s = x.sqrt_positive().unwrap();
        assert_eq!(s.coeff(-2), rat(3, 1));
        assert_eq!(s.truncation(), DEFAULT_TRUNCATION + 2);
    }

    #[test]
    fn ordering_is_by_leading_term() {
        // 0 < r^5 < r < 3r < 1 - 100r < 1 < r^-1 - 1000
        let chain = [
            Float::zero(),
            Float::rho_power(5),
            Float::rho(),
            Float::rho().scale_by(&3.0),
            Float::from_terms([(0, 1.0), (1, -100.0)]),
            Float::one(),
            Float::from_terms([(-1, 1.0), (0, -1000.0)]),
        ];
        for pair in chain.windows(2) {
            assert_eq!(pair[0].compare(&pair[1]), Ordering::Less);
            assert_eq!(pair[1].compare(&pair[0]), Ordering::Greater);
        }
        assert_eq!(chain[2].compare(&chain[2].clone()), Ordering::Equal);
    }

    #[test]
    fn standard_parts() {
        let finite = Float::from_terms([(0, 2.5), (1, 7.0)]);
        assert_eq!(finite.standard_part(), StandardPart::Finite(2.5));
        assert_eq!(
            Float::rho().standard_part(),
            StandardPart::Finite(0.0)
        );
        assert_eq!(Float::zero().standard_part(), StandardPart::Finite(0.0));
        assert_eq!(
            Float::rho_power(-2).standard_part(),
            StandardPart::PlusInfinity
        );
        assert_eq!(
            Float::rho_power(-2).neg().standard_part(),
            StandardPart::MinusInfinity
        );
    }

    #[test]
    fn asymptotic_split_separates_shadow() {
        let x = Float::from_terms([(0, 4.0), (2, -1.0)]);
        let (shadow, rest) = x.asymptotic_split().unwrap();
        assert_eq!(shadow, 4.0);
        assert_eq!(rest, Float::from_terms([(2, -1.0)]));
        assert!(matches!(rest.valuation(), Some(v) if v >= 1));
        assert_eq!(
            Float::rho_power(-1).asymptotic_split(),
            Err(FieldError::InfinitelyLarge)
        );
    }

    #[test]
    fn classification_partitions_by_valuation() {
        let class = |x: &Float| x.classify().unwrap();
        let inf = class(&Float::rho());
        assert_eq!(inf.scale, Scale::Infinitesimal);
        assert_eq!(inf.rho, RhoClass::RhoInfinitesimalProper);
        let fin = class(&Float::from_terms([(0, -2.0), (3, 1.0)]));
        assert_eq!(fin.scale, Scale::FiniteAppreciable);
        assert_eq!(fin.rho, RhoClass::RhoConstant);
        let large = class(&Float::rho_power(-4));
        assert_eq!(large.scale, Scale::InfinitelyLarge);
        assert_eq!(large.rho, RhoClass::RhoModerateOnly);
        assert_eq!(
            Float::zero().classify(),
            Err(FieldError::ZeroUnclassifiable)
        );
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = Exact::from_terms([(0, rat(1, 1)), (1, rat(2, 1))]);
        let cube = x.pow(3).unwrap();
        assert_eq!(cube, x.mul(&x).mul(&x));
        let back = cube.mul(&x.pow(-3).unwrap());
        assert_eq!(back, Exact::one().truncated(back.truncation()));
    }

    #[test]
    fn render_round_trip_shapes() {
        let x = Float::from_terms([(0, 3.0), (1, 1.0), (2, -2.0)]);
        assert_eq!(x.render(), "3 + 1*r^1 - 2*r^2");
        assert_eq!(Float::zero().render(), "0");
        assert_eq!(Float::rho_power(-2).neg().render(), "-1*r^-2");
        let y = Exact::monomial(rat(2, 3), 2);
        assert_eq!(y.render(), "2/3*r^2");
    }
}
