//! Classical pre-shock solutions of the Hopf equation by characteristics,
//! and the three-way equivalence of its differential, advection, and
//! balance forms.
//!
//! Smooth initial data u₀ propagates along straight characteristics:
//! u(x,t) solves the implicit equation u = u₀(x − u·t), which has a unique
//! solution while t < 1/max|u₀′|. On that solution the three statements
//!
//!   (i)  u_t + (u²/2)_x = 0
//!   (ii) u_t + u·u_x = 0
//!   (iii) d/dt ∫_a^b u dx = ½[u²(a,t) − u²(b,t)]
//!
//! are equivalent; discretizing each independently must produce residuals
//! that agree with zero at the finite-difference order.

use crate::error::SolitonError;
use distribution_lab::{quad, BumpPoly};
use serde::Serialize;

/// Convergence target for the implicit characteristic equation.
const ROOT_TOL: f64 = 1e-14;

/// Smooth initial data with a closed-form derivative and a slope bound.
#[derive(Debug, Clone)]
pub enum InitialData {
    /// u₀ ≡ c: the solution stays c forever.
    Constant(f64),
    /// u₀(x) = x: the solution is the rarefaction u = x/(1+t).
    Linear,
    /// u₀(x) = amplitude·φ(x) for a compactly supported smooth bump φ.
    Bump { amplitude: f64, shape: BumpPoly },
}

impl InitialData {
    pub fn bump(amplitude: f64, radius: f64) -> Self {
        InitialData::Bump {
            amplitude,
            shape: BumpPoly::standard(radius),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialData::Constant(c) => *c,
            InitialData::Linear => x,
            InitialData::Bump { amplitude, shape } => amplitude * shape.eval(x),
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        match self {
            InitialData::Constant(_) => 0.0,
            InitialData::Linear => 1.0,
            InitialData::Bump { amplitude, shape } => amplitude * shape.derivative().eval(x),
        }
    }

    /// max|u₀′|, taken over a fine grid for bump data; exact otherwise.
    pub fn max_abs_slope(&self) -> f64 {
        match self {
            InitialData::Constant(_) => 0.0,
            InitialData::Linear => 1.0,
            InitialData::Bump { amplitude, shape } => {
                let d = shape.derivative();
                let (lo, hi) = shape.support();
                let steps = 4000;
                let mut sup = 0.0f64;
                for i in 0..=steps {
                    let x = lo + (hi - lo) * i as f64 / steps as f64;
                    sup = sup.max(d.eval(x).abs());
                }
                amplitude.abs() * sup
            }
        }
    }

    /// 1/max|u₀′|; infinite for constant data.
    pub fn shock_time(&self) -> f64 {
        let s = self.max_abs_slope();
        if s == 0.0 {
            f64::INFINITY
        } else {
            1.0 / s
        }
    }
}

/// Solves u = u₀(x − u·t) by Newton with a slope-bound safeguard. Requires
/// t below the shock time so the equation stays monotone in u.
pub fn characteristics_solve(data: &InitialData, x: f64, t: f64) -> Result<f64, SolitonError> {
    if t < 0.0 {
        return Err(SolitonError::BadParameter(format!("t must be >= 0, got {t}")));
    }
    let t_shock = data.shock_time();
    if t >= t_shock {
        return Err(SolitonError::BeyondShockTime { t, t_shock });
    }
    // g(u) = u − u₀(x − ut) has g' = 1 + t·u₀' >= 1 − t·max|u₀'| > 0.
    let monotone_floor = 1.0 - t * data.max_abs_slope();
    let mut u = data.eval(x);
    for _ in 0..200 {
        let g = u - data.eval(x - u * t);
        if g.abs() <= ROOT_TOL * (1.0 + u.abs()) {
            return Ok(u);
        }
        let gp = 1.0 + t * data.slope(x - u * t);
        let denom = if gp > monotone_floor * 0.5 {
            gp
        } else {
            monotone_floor
        };
        u -= g / denom;
    }
    Err(SolitonError::CharacteristicDiverged { x, t })
}

/// Residuals of the three equivalent forms at one discretization step.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub step: f64,
    /// sup |u_t + (u²/2)_x| over the probe grid.
    pub flux_form: f64,
    /// sup |u_t + u·u_x| over the probe grid.
    pub advection_form: f64,
    /// |d/dt ∫_a^b u dx − ½(u²(a) − u²(b))|.
    pub balance_form: f64,
}

/// Evaluates all three forms with central differences of size `step` on
/// `probes` points across [a, b]. The balance integral uses quadrature and
/// shares the same time step.
pub fn equivalence_check(
    data: &InitialData,
    a: f64,
    b: f64,
    t: f64,
    step: f64,
    probes: usize,
) -> Result<EquivalenceReport, SolitonError> {
    if !(a < b) || !(step > 0.0) || probes < 2 {
        return Err(SolitonError::BadParameter(
            "need a < b, positive step, and at least 2 probes".into(),
        ));
    }
    if t - step < 0.0 {
        return Err(SolitonError::BadParameter(
            "time step reaches below t = 0".into(),
        ));
    }
    let u = |x: f64, tt: f64| characteristics_solve(data, x, tt);

    let mut flux = 0.0f64;
    let mut advection = 0.0f64;
    for i in 0..probes {
        let x = a + (b - a) * i as f64 / (probes - 1) as f64;
        let u_c = u(x, t)?;
        let u_tp = u(x, t + step)?;
        let u_tm = u(x, t - step)?;
        let u_xp = u(x + step, t)?;
        let u_xm = u(x - step, t)?;
        let ut = (u_tp - u_tm) / (2.0 * step);
        let ux = (u_xp - u_xm) / (2.0 * step);
        let flux_x = (u_xp * u_xp - u_xm * u_xm) / (4.0 * step);
        flux = flux.max((ut + flux_x).abs());
        advection = advection.max((ut + u_c * ux).abs());
    }

    let mass = |tt: f64| -> Result<f64, SolitonError> {
        let failed = std::cell::Cell::new(false);
        let value = quad::integrate(
            |x: f64| {
                u(x, tt).unwrap_or_else(|_| {
                    failed.set(true);
                    f64::NAN
                })
            },
            &[a, b],
        );
        if failed.get() {
            Err(SolitonError::CharacteristicDiverged { x: a, t: tt })
        } else {
            Ok(value)
        }
    };
    let dmass = (mass(t + step)? - mass(t - step)?) / (2.0 * step);
    let ua = u(a, t)?;
    let ub = u(b, t)?;
    let balance = (dmass - 0.5 * (ua * ua - ub * ub)).abs();

    Ok(EquivalenceReport {
        step,
        flux_form: flux,
        advection_form: advection,
        balance_form: balance,
    })
}

/// Re-evaluates the three forms under successive step halvings and reports
/// the observed convergence orders log2(r(h)/r(h/2)) per form (skipping
/// levels already at rounding noise).
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RefinementScan {
    pub reports: Vec<EquivalenceReport>,
    pub flux_orders: Vec<f64>,
    pub advection_orders: Vec<f64>,
    pub balance_orders: Vec<f64>,
}

/// Residuals below this are treated as rounding noise when estimating
/// refinement orders.
pub const REFINEMENT_FLOOR: f64 = 1e-12;

pub fn equivalence_refinement(
    data: &InitialData,
    a: f64,
    b: f64,
    t: f64,
    step0: f64,
    levels: usize,
    probes: usize,
) -> Result<RefinementScan, SolitonError> {
    if levels < 2 {
        return Err(SolitonError::BadParameter(
            "refinement needs at least 2 levels".into(),
        ));
    }
    let mut reports = Vec::with_capacity(levels);
    let mut h = step0;
    for _ in 0..levels {
        reports.push(equivalence_check(data, a, b, t, h, probes)?);
        h *= 0.5;
    }
    let orders = |pick: fn(&EquivalenceReport) -> f64| -> Vec<f64> {
        reports
            .windows(2)
            .filter(|w| pick(&w[0]) > REFINEMENT_FLOOR && pick(&w[1]) > REFINEMENT_FLOOR)
            .map(|w| (pick(&w[0]) / pick(&w[1])).log2())
            .collect()
    };
    Ok(RefinementScan {
        flux_orders: orders(|r| r.flux_form),
        advection_orders: orders(|r| r.advection_form),
        balance_orders: orders(|r| r.balance_form),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_data_stays_constant() {
        let data = InitialData::Constant(2.5);
        for (x, t) in [(-3.0, 0.0), (0.0, 5.0), (7.0, 100.0)] {
            assert_eq!(characteristics_solve(&data, x, t).unwrap(), 2.5);
        }
    }

    #[test]
    fn linear_data_gives_the_rarefaction() {
        let data = InitialData::Linear;
        for (x, t) in [(1.0, 0.5), (-2.0, 0.9), (0.3, 0.0)] {
            let u = characteristics_solve(&data, x, t).unwrap();
            assert_relative_eq!(u, x / (1.0 + t), epsilon = 1e-13);
        }
    }

    #[test]
    fn shock_time_guards_the_solve() {
        let data = InitialData::Linear;
        assert!(matches!(
            characteristics_solve(&data, 0.0, 1.0),
            Err(SolitonError::BeyondShockTime { .. })
        ));
        assert_eq!(InitialData::Constant(1.0).shock_time(), f64::INFINITY);
    }

    #[test]
    fn bump_solution_satisfies_the_advection_form() {
        let data = InitialData::bump(0.3, 1.0);
        let t = 0.25 * data.shock_time();
        let report = equivalence_check(&data, -1.5, 1.5, t, 1e-3, 21).unwrap();
        assert!(report.advection_form < 1e-6, "{:.3e}", report.advection_form);
        assert!(report.flux_form < 1e-6, "{:.3e}", report.flux_form);
    }

    #[test]
    fn constant_solution_has_exactly_zero_residuals() {
        let data = InitialData::Constant(0.8);
        let report = equivalence_check(&data, -1.0, 2.0, 1.0, 1e-3, 11).unwrap();
        assert_eq!(report.flux_form, 0.0);
        assert_eq!(report.advection_form, 0.0);
        assert!(report.balance_form < 1e-12);
    }

    #[test]
    fn rarefaction_balance_residual_is_tiny() {
        let data = InitialData::Linear;
        let report = equivalence_check(&data, -1.0, 1.0, 0.5, 1e-3, 11).unwrap();
        assert!(report.balance_form < 1e-8, "{:.3e}", report.balance_form);
    }

    #[test]
    fn refinement_shows_second_order_decay() {
        let data = InitialData::bump(0.3, 1.0);
        let t = 0.25 * data.shock_time();
        let scan = equivalence_refinement(&data, -1.5, 1.5, t, 4e-3, 3, 15).unwrap();
        for order in scan
            .flux_orders
            .iter()
            .chain(&scan.advection_orders)
            .chain(&scan.balance_orders)
        {
            assert!(
                (*order - 2.0).abs() < 0.5,
                "expected second order, saw {order:.2}: {scan:#?}"
            );
        }
        assert!(!scan.flux_orders.is_empty());
        assert!(!scan.advection_orders.is_empty());
    }
}
