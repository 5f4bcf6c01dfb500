//! Smooth compactly supported test functions with exact derivatives.
//!
//! The analytic family is q(u) * E(u) on |u| < 1 and zero outside, where
//! u = (x - center)/radius, E(u) = exp(-1/(1 - u^2)), and q is a rational
//! function of the special shape N(u) / (1 - u^2)^k. The family is closed
//! under differentiation:
//!
//!   d/dx [N(u)(1-u^2)^{-k} E(u)]
//!     = [N'(u)(1-u^2)^2 + 2u(k(1-u^2) - 1)N(u)] (1-u^2)^{-(k+2)} E(u) / radius
//!
//! so every derivative order stays in the family and evaluates in closed
//! form. No finite differences appear anywhere in the pairing rules.

use crate::error::LabError;
use crate::poly;
use mollifier_forge::PiecewiseLinear;

/// A bump function N(u)(1-u^2)^{-k} exp(-1/(1-u^2)) on |u| < 1, with
/// u = (x - center)/radius, extended by zero.
#[derive(Debug, Clone)]
pub struct BumpPoly {
    /// Numerator polynomial N in the scaled coordinate u, ascending.
    numerator: Vec<f64>,
    /// Power k of the (1 - u^2) denominator; grows by 2 per derivative.
    denom_power: usize,
    radius: f64,
    center: f64,
}

impl BumpPoly {
    /// The reference bump exp(-1/(1-(x/radius)^2)) on |x| < radius.
    pub fn standard(radius: f64) -> Self {
        assert!(radius > 0.0, "bump radius must be positive");
        BumpPoly {
            numerator: vec![1.0],
            denom_power: 0,
            radius,
            center: 0.0,
        }
    }

    /// p(x) times the reference bump, with p given by ascending
    /// coefficients in the unscaled coordinate x (center 0).
    pub fn with_polynomial(coefficients: &[f64], radius: f64) -> Self {
        assert!(radius > 0.0, "bump radius must be positive");
        assert!(!coefficients.is_empty(), "polynomial factor must be nonempty");
        // p(x) = p(radius * u): rescale coefficient k by radius^k.
        let numerator = coefficients
            .iter()
            .enumerate()
            .map(|(k, &c)| c * radius.powi(k as i32))
            .collect();
        BumpPoly {
            numerator,
            denom_power: 0,
            radius,
            center: 0.0,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Support interval (closed hull of the nonzero set).
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.radius;
        let s = 1.0 - u * u;
        if s <= 0.0 {
            return 0.0;
        }
        // N(u) * t^k * e^{-t} with t = 1/s, assembled in log form so the
        // t^k factor cannot overflow near the support edge.
        let t = 1.0 / s;
        poly::eval(&self.numerator, u) * (self.denom_power as f64 * t.ln() - t).exp()
    }

    /// The same bump translated by dx.
    pub fn translated(&self, dx: f64) -> Self {
        let mut out = self.clone();
        out.center += dx;
        out
    }

    /// The delta-family member phi((x - center*eps)/eps)/eps: radius and
    /// center shrink by eps, amplitude grows by 1/eps. The profile keeps
    /// unit mass if it had it.
    pub fn scaled_to_delta(&self, eps: f64) -> Self {
        assert!(eps > 0.0, "scaling parameter must be positive");
        BumpPoly {
            numerator: self.numerator.iter().map(|c| c / eps).collect(),
            denom_power: self.denom_power,
            radius: self.radius * eps,
            center: self.center * eps,
        }
    }

    /// Exact derivative, staying inside the family.
    pub fn derivative(&self) -> Self {
        let n = &self.numerator;
        let k = self.denom_power as f64;
        // N'(u)(1-u^2)^2
        let one_minus_u2 = [1.0, 0.0, -1.0];
        let sq = poly::mul(&one_minus_u2, &one_minus_u2);
        let mut num = poly::mul(&poly::derivative(n), &sq);
        // + 2u k (1-u^2) N
        let mix = poly::mul(&[0.0, 2.0 * k], &one_minus_u2);
        poly::add_scaled(&mut num, &poly::mul(&mix, n), 1.0);
        // - 2u N
        poly::add_scaled(&mut num, &poly::mul(&[0.0, 2.0], n), -1.0);
        for c in num.iter_mut() {
            *c /= self.radius;
        }
        while num.len() > 1 && num.last() == Some(&0.0) {
            num.pop();
        }
        BumpPoly {
            numerator: num,
            denom_power: self.denom_power + 2,
            radius: self.radius,
            center: self.center,
        }
    }
}

/// A compactly supported smooth test function: either an analytic bump
/// with exact derivatives, or sampled piecewise-linear data.
#[derive(Debug, Clone)]
pub enum TestFunction {
    Bump(BumpPoly),
    Sampled(PiecewiseLinear),
}

impl TestFunction {
    /// The reference bump of the given radius.
    pub fn bump(radius: f64) -> Self {
        TestFunction::Bump(BumpPoly::standard(radius))
    }

    /// Polynomial-modulated bump; coefficients ascending in x.
    pub fn bump_poly(coefficients: &[f64], radius: f64) -> Self {
        TestFunction::Bump(BumpPoly::with_polynomial(coefficients, radius))
    }

    /// Wraps sampled data as a test function.
    pub fn sampled(profile: PiecewiseLinear) -> Self {
        TestFunction::Sampled(profile)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Bump(b) => b.eval(x),
            TestFunction::Sampled(p) => p.eval(x),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            TestFunction::Bump(b) => b.support(),
            TestFunction::Sampled(p) => p.support(),
        }
    }

    /// Translated copy.
    pub fn translated(&self, dx: f64) -> Self {
        match self {
            TestFunction::Bump(b) => TestFunction::Bump(b.translated(dx)),
            TestFunction::Sampled(p) => TestFunction::Sampled(p.translated(dx)),
        }
    }

    /// Interior integration breakpoints (kinks of the sampled form).
    pub fn interior_breakpoints(&self) -> Vec<f64> {
        match self {
            TestFunction::Bump(_) => Vec::new(),
            TestFunction::Sampled(p) => {
                let n = p.breakpoints().len();
                p.breakpoints()[1..n - 1].to_vec()
            }
        }
    }

    /// Exact derivative; sampled data has none.
    pub fn derivative(&self) -> Result<TestFunction, LabError> {
        match self {
            TestFunction::Bump(b) => Ok(TestFunction::Bump(b.derivative())),
            TestFunction::Sampled(_) => Err(LabError::UnsupportedDerivative(
                "sampled test functions are only piecewise linear".into(),
            )),
        }
    }

    /// n-th exact derivative.
    pub fn nth_derivative(&self, n: usize) -> Result<TestFunction, LabError> {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derivative()?;
        }
        Ok(out)
    }
}

/// A small panel of dissimilar test functions used by the tabulated
/// experiments: plain bumps at two widths, a translated bump, and two
/// polynomial-modulated bumps (one odd-skewed, one even). All five are
/// nonzero at the origin.
pub fn standard_panel() -> Vec<TestFunction> {
    vec![
        TestFunction::bump(1.0),
        TestFunction::bump(2.0),
        TestFunction::bump(1.0).translated(0.25),
        TestFunction::bump_poly(&[1.0, 1.0], 1.5),
        TestFunction::bump_poly(&[1.0, 0.0, -0.4], 1.25),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_bump_values() {
        let b = BumpPoly::standard(1.0);
        assert!((b.eval(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(b.eval(1.0), 0.0);
        assert_eq!(b.eval(-1.2), 0.0);
        // Values just inside the edge underflow smoothly to zero.
        assert!(b.eval(0.999_999).abs() < 1e-100);
    }

    #[test]
    fn polynomial_factor_uses_unscaled_coordinates() {
        // tau(x) = x * bump(x/2): at x = 0.6 the factor is 0.6 itself.
        let b = BumpPoly::with_polynomial(&[0.0, 1.0], 2.0);
        let plain = BumpPoly::standard(2.0);
        assert!((b.eval(0.6) - 0.6 * plain.eval(0.6)).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let cases = [
            BumpPoly::standard(1.0),
            BumpPoly::with_polynomial(&[1.0, 2.0, -0.5], 1.5).translated(0.2),
        ];
        for b in &cases {
            let db = b.derivative();
            let h = 1e-5;
            for &x in &[-0.7, -0.2, 0.0, 0.35, 0.8] {
                let fd = (b.eval(x + h) - b.eval(x - h)) / (2.0 * h);
                assert!(
                    (db.eval(x) - fd).abs() < 1e-7 * (1.0 + fd.abs()),
                    "derivative mismatch at x = {x}: exact {} vs fd {fd}",
                    db.eval(x)
                );
            }
        }
    }

    #[test]
    fn second_derivative_matches_central_differences() {
        let b = BumpPoly::standard(1.0);
        let d2 = b.derivative().derivative();
        let h = 1e-4;
        for &x in &[-0.5, 0.0, 0.3] {
            let fd = (b.eval(x + h) - 2.0 * b.eval(x) + b.eval(x - h)) / (h * h);
            assert!((d2.eval(x) - fd).abs() < 1e-5 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn derivatives_vanish_outside_the_support() {
        let d3 = BumpPoly::standard(0.8).derivative().derivative().derivative();
        assert_eq!(d3.eval(0.81), 0.0);
        assert_eq!(d3.eval(-5.0), 0.0);
        let (lo, hi) = d3.support();
        assert_eq!((lo, hi), (-0.8, 0.8));
    }

    #[test]
    fn delta_scaling_concentrates_and_renormalizes() {
        let b = BumpPoly::standard(1.0);
        let tight = b.scaled_to_delta(0.1);
        assert_eq!(tight.support(), (-0.1, 0.1));
        // phi_eps(eps x) = phi(x)/eps.
        assert!((tight.eval(0.05) - b.eval(0.5) / 0.1).abs() < 1e-12);
    }

    #[test]
    fn sampled_test_functions_refuse_differentiation() {
        let tf = TestFunction::sampled(PiecewiseLinear::new(
            vec![-1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ));
        assert!(matches!(
            tf.derivative(),
            Err(LabError::UnsupportedDerivative(_))
        ));
    }

    #[test]
    fn translation_moves_the_center() {
        let tf = TestFunction::bump(1.0).translated(2.0);
        assert_eq!(tf.support(), (1.0, 3.0));
        assert!((tf.eval(2.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn standard_panel_is_nonzero_at_the_origin() {
        for tf in standard_panel() {
            assert!(tf.eval(0.0).abs() > 1e-3);
        }
    }
}
