//! Distributions as finite tagged descriptions with exact pairing rules.
//!
//! A distribution is a point mass, a step, a polynomial density, sampled
//! locally integrable data, a distributional derivative of another entry,
//! or a finite linear combination. The pairing T[tau] dispatches per
//! variant; derivatives transpose onto the test function with the
//! alternating sign,
//!
//!   (d^k T)[tau] = (-1)^k T[tau^(k)],
//!
//! so arbitrary derivative orders cost one closed-form differentiation of
//! tau and nothing else.

use crate::error::LabError;
use crate::poly;
use crate::quad;
use crate::testfn::TestFunction;
use mollifier_forge::PiecewiseLinear;

/// The step convention at the jump: a step based at `offset` evaluates to
/// 0 at x = offset itself. Pairings never depend on this (a single point
/// carries no mass); classical sampling does.
pub const STEP_AT_JUMP: f64 = 0.0;

/// A distribution described by finitely many exact ingredients.
#[derive(Debug, Clone)]
pub enum Distribution {
    /// Point mass at `center`.
    DiracDelta { center: f64 },
    /// Unit step rising at `offset`.
    Heaviside { offset: f64 },
    /// Polynomial density with ascending coefficients.
    Polynomial { coefficients: Vec<f64> },
    /// Sampled locally integrable data, defined only on its grid span.
    SampledLocallyIntegrable(PiecewiseLinear),
    /// `order`-th distributional derivative of `base`.
    DerivativeOf {
        base: Box<Distribution>,
        order: usize,
    },
    /// Finite linear combination of weighted distributions.
    Combination(Vec<(f64, Distribution)>),
}

impl Distribution {
    /// Point mass at the origin.
    pub fn delta() -> Self {
        Distribution::DiracDelta { center: 0.0 }
    }

    pub fn delta_at(center: f64) -> Self {
        Distribution::DiracDelta { center }
    }

    /// Unit step rising at the origin.
    pub fn heaviside() -> Self {
        Distribution::Heaviside { offset: 0.0 }
    }

    pub fn heaviside_at(offset: f64) -> Self {
        Distribution::Heaviside { offset }
    }

    /// Polynomial density; constant 0 is allowed (empty sum pairs to 0).
    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        Distribution::Polynomial { coefficients }
    }

    pub fn sampled(profile: PiecewiseLinear) -> Self {
        Distribution::SampledLocallyIntegrable(profile)
    }

    /// `order`-th derivative; the order must be at least 1.
    pub fn derivative(base: Distribution, order: usize) -> Result<Self, LabError> {
        if order == 0 {
            return Err(LabError::InvalidDistribution(
                "derivative order must be at least 1".into(),
            ));
        }
        Ok(Distribution::DerivativeOf {
            base: Box::new(base),
            order,
        })
    }

    /// Non-empty weighted combination.
    pub fn combination(terms: Vec<(f64, Distribution)>) -> Result<Self, LabError> {
        if terms.is_empty() {
            return Err(LabError::InvalidDistribution(
                "combination must have at least one term".into(),
            ));
        }
        Ok(Distribution::Combination(terms))
    }

    /// Checks the structural invariants recursively.
    pub fn validate(&self) -> Result<(), LabError> {
        match self {
            Distribution::DiracDelta { .. }
            | Distribution::Heaviside { .. }
            | Distribution::Polynomial { .. }
            | Distribution::SampledLocallyIntegrable(_) => Ok(()),
            Distribution::DerivativeOf { base, order } => {
                if *order == 0 {
                    return Err(LabError::InvalidDistribution(
                        "derivative order must be at least 1".into(),
                    ));
                }
                base.validate()
            }
            Distribution::Combination(terms) => {
                if terms.is_empty() {
                    return Err(LabError::InvalidDistribution(
                        "combination must have at least one term".into(),
                    ));
                }
                terms.iter().try_for_each(|(_, d)| d.validate())
            }
        }
    }

    /// Pointwise classical value where the distribution is a function
    /// almost everywhere; None for point masses and their derivatives.
    pub fn eval_classical(&self, x: f64) -> Option<f64> {
        match self {
            Distribution::DiracDelta { .. } | Distribution::DerivativeOf { .. } => None,
            Distribution::Heaviside { offset } => Some(if x > *offset {
                1.0
            } else if x < *offset {
                0.0
            } else {
                STEP_AT_JUMP
            }),
            Distribution::Polynomial { coefficients } => Some(poly::eval(coefficients, x)),
            Distribution::SampledLocallyIntegrable(p) => Some(p.eval(x)),
            Distribution::Combination(terms) => terms
                .iter()
                .map(|(c, d)| d.eval_classical(x).map(|v| c * v))
                .sum(),
        }
    }

    /// True when the distribution is an ordinary function, so sup-norm
    /// comparisons against its smoothed versions make sense.
    pub fn is_function_like(&self) -> bool {
        match self {
            Distribution::Polynomial { .. } | Distribution::SampledLocallyIntegrable(_) => true,
            Distribution::Combination(terms) => terms.iter().all(|(_, d)| d.is_function_like()),
            _ => false,
        }
    }

    /// The pairing T[tau].
    pub fn pair(&self, tau: &TestFunction) -> Result<f64, LabError> {
        match self {
            Distribution::DiracDelta { center } => Ok(tau.eval(*center)),
            Distribution::Heaviside { offset } => {
                let (lo, hi) = tau.support();
                let start = offset.max(lo);
                if start >= hi {
                    return Ok(0.0);
                }
                let mut breaks = vec![start, hi];
                breaks.extend(
                    tau.interior_breakpoints()
                        .into_iter()
                        .filter(|&x| x > start && x < hi),
                );
                Ok(quad::integrate(|x| tau.eval(x), &breaks))
            }
            Distribution::Polynomial { coefficients } => {
                let (lo, hi) = tau.support();
                let mut breaks = vec![lo, hi];
                breaks.extend(tau.interior_breakpoints());
                let c = coefficients.clone();
                Ok(quad::integrate(
                    move |x| poly::eval(&c, x) * tau.eval(x),
                    &breaks,
                ))
            }
            Distribution::SampledLocallyIntegrable(data) => {
                let (lo, hi) = tau.support();
                let (dlo, dhi) = data.support();
                if dlo > lo || dhi < hi {
                    return Err(LabError::Coverage {
                        data_lo: dlo,
                        data_hi: dhi,
                        need_lo: lo,
                        need_hi: hi,
                    });
                }
                let mut breaks = vec![lo, hi];
                breaks.extend(
                    data.breakpoints()
                        .iter()
                        .copied()
                        .filter(|&x| x > lo && x < hi),
                );
                breaks.extend(tau.interior_breakpoints());
                Ok(quad::integrate(
                    move |x| data.eval(x) * tau.eval(x),
                    &breaks,
                ))
            }
            Distribution::DerivativeOf { base, order } => {
                let dtau = tau.nth_derivative(*order)?;
                let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
                Ok(sign * base.pair(&dtau)?)
            }
            Distribution::Combination(terms) => {
                let mut acc = 0.0;
                for (c, d) in terms {
                    acc += c * d.pair(tau)?;
                }
                Ok(acc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;

    #[test]
    fn delta_sifts() {
        let tau = TestFunction::bump(1.0);
        let val = Distribution::delta().pair(&tau).unwrap();
        assert!((val - (-1.0f64).exp()).abs() < 1e-15);
        let shifted = Distribution::delta_at(0.5).pair(&tau).unwrap();
        assert!((shifted - tau.eval(0.5)).abs() < 1e-15);
    }

    #[test]
    fn delta_derivative_flips_sign_onto_tau() {
        let tau = TestFunction::bump_poly(&[1.0, 2.0], 1.0);
        let dtau = tau.derivative().unwrap();
        let d = Distribution::derivative(Distribution::delta(), 1).unwrap();
        let val = d.pair(&tau).unwrap();
        assert!((val + dtau.eval(0.0)).abs() < 1e-15);
    }

    #[test]
    fn step_pairing_matches_an_independent_quadrature() {
        let tau = TestFunction::bump(1.0);
        let val = Distribution::heaviside().pair(&tau).unwrap();
        let oracle = adaptive_simpson(|x| tau.eval(x), 0.0, 1.0, 1e-13);
        assert!((val - oracle).abs() < 1e-11);
        // A step far to the right of the support pairs to zero.
        assert_eq!(Distribution::heaviside_at(5.0).pair(&tau).unwrap(), 0.0);
    }

    #[test]
    fn polynomial_pairing_matches_an_independent_quadrature() {
        let tau = TestFunction::bump_poly(&[0.5, 0.0, 1.0], 1.5);
        let p = Distribution::polynomial(vec![1.0, -2.0, 0.0, 3.0]);
        let val = p.pair(&tau).unwrap();
        let oracle = adaptive_simpson(
            |x| (1.0 - 2.0 * x + 3.0 * x * x * x) * tau.eval(x),
            -1.5,
            1.5,
            1e-13,
        );
        assert!((val - oracle).abs() < 1e-11);
    }

    #[test]
    fn sampled_data_must_cover_the_test_support() {
        let data = PiecewiseLinear::new(vec![-0.5, 0.5], vec![1.0, 1.0]);
        let tau = TestFunction::bump(1.0);
        assert!(matches!(
            Distribution::sampled(data).pair(&tau),
            Err(LabError::Coverage { .. })
        ));
    }

    #[test]
    fn pairing_is_linear_in_the_distribution() {
        let tau = TestFunction::bump(1.0);
        let a = Distribution::delta();
        let b = Distribution::heaviside();
        let combo =
            Distribution::combination(vec![(2.0, a.clone()), (-3.0, b.clone())]).unwrap();
        let direct = 2.0 * a.pair(&tau).unwrap() - 3.0 * b.pair(&tau).unwrap();
        assert!((combo.pair(&tau).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(Distribution::derivative(Distribution::delta(), 0).is_err());
        assert!(Distribution::combination(vec![]).is_err());
        let nested = Distribution::Combination(vec![(
            1.0,
            Distribution::DerivativeOf {
                base: Box::new(Distribution::delta()),
                order: 0,
            },
        )]);
        assert!(nested.validate().is_err());
    }

    #[test]
    fn second_derivative_transposes_twice() {
        // (delta'')[tau] = tau''(0).
        let tau = TestFunction::bump(1.0);
        let d2tau = tau.nth_derivative(2).unwrap();
        let d2 = Distribution::derivative(Distribution::delta(), 2).unwrap();
        assert!((d2.pair(&tau).unwrap() - d2tau.eval(0.0)).abs() < 1e-13);
    }

    #[test]
    fn classical_values_where_defined() {
        let h = Distribution::heaviside();
        assert_eq!(h.eval_classical(-1.0), Some(0.0));
        assert_eq!(h.eval_classical(0.0), Some(STEP_AT_JUMP));
        assert_eq!(h.eval_classical(2.0), Some(1.0));
        assert_eq!(Distribution::delta().eval_classical(0.0), None);
        let p = Distribution::polynomial(vec![1.0, 1.0]);
        assert_eq!(p.eval_classical(2.0), Some(3.0));
        assert!(p.is_function_like());
        assert!(!h.is_function_like());
    }
}
