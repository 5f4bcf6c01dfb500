//! Assembly and solution of the moment linear program.
//!
//! Unknowns are the node values ψ₀..ψ_{M-1} of an even piecewise-linear
//! function on a symmetric grid of spacing h (ψ_M = 0 is pinned at the
//! support boundary). Moments of the hat function Λ_s of width h centred at
//! s have the closed form
//!
//!   ∫ xᵏ Λ_s(x) dx = h · Σ_{j even, j≤k} C(k,j) s^{k-j} hʲ · 2/((j+1)(j+2)),
//!
//! which at k = 0 reduces to the trapezoid weight h. Assembling moments from
//! these exact hat integrals rather than from node-value quadrature keeps
//! the constraint "∫ xᵏ φ = 0" a statement about the actual piecewise-linear
//! function, not about a discretization of it. That matters: under a pure
//! trapezoid discretization a one-node spike at the origin satisfies every
//! sampled moment equation while the function it interpolates does not.
//!
//! The peak bound |ψ| ≤ peak_factor/(2R) removes the other degeneracy. An
//! unconstrained minimizer concentrates its positive mass into an arbitrarily
//! tall, arbitrarily thin tent at the origin, which is a delta in disguise;
//! capping the amplitude forces an honest profile whose sharpness is chosen
//! by the caller rather than by the grid.

use crate::mollifier::Mollifier;
use crate::piecewise::PiecewiseLinear;
use crate::simplex::{gauss_solve, solve, LinearProgram, SimplexOutcome};
use crate::MollifierError;

/// Parameters of a mollifier construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifierRequest {
    /// Highest moment forced to vanish (the mass is always 1).
    pub order: usize,
    /// Support half-width R; the function lives on [-R, R].
    pub support_radius: f64,
    /// Number of grid nodes across the full support, odd so one sits at 0.
    pub grid_points: usize,
    /// Amplitude cap as a multiple of the flat density 1/(2R).
    pub peak_factor: f64,
}

impl MollifierRequest {
    /// Defaults for order n: support 1/n, a 401-point grid, and amplitude at
    /// most four times the flat density.
    pub fn for_order(order: usize) -> Self {
        MollifierRequest {
            order,
            support_radius: 1.0 / order.max(1) as f64,
            grid_points: 401,
            peak_factor: 4.0,
        }
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn with_support_radius(mut self, support_radius: f64) -> Self {
        self.support_radius = support_radius;
        self
    }

    pub fn with_peak_factor(mut self, peak_factor: f64) -> Self {
        self.peak_factor = peak_factor;
        self
    }
}

/// ∫ xᵏ Λ_s(x) dx for the hat of width h at centre s (odd powers of the
/// offset integrate to zero over the symmetric hat).
fn hat_moment(k: usize, s: f64, h: f64) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0_f64;
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as f64 / j as f64;
        }
        if j % 2 == 0 {
            total += binom * s.powi((k - j) as i32) * h.powi(j as i32) * 2.0
                / ((j + 1) * (j + 2)) as f64;
        }
    }
    h * total
}

/// Moment row over the half-grid unknowns: coefficient of ψ_j in
/// ∫ xᵏ φ(x) dx for the even extension (interior nodes count twice).
fn moment_row(k: usize, half_points: usize, h: f64) -> Vec<f64> {
    (0..half_points)
        .map(|j| {
            let w = hat_moment(k, j as f64 * h, h);
            if j == 0 {
                w
            } else {
                2.0 * w
            }
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One least-squares correction: minimal-norm Δψ with G(ψ + Δψ) = b, via
/// the normal equations of the (row-normalized) constraint matrix. The
/// simplex solution satisfies the system to pivot tolerance; this pushes the
/// residual to rounding level without disturbing the profile visibly.
fn polish(rows: &[Vec<f64>], rhs: &[f64], psi: &mut [f64]) {
    let r = rows.len();
    let norms: Vec<f64> = rows.iter().map(|row| dot(row, row).sqrt().max(1e-300)).collect();
    let residual: Vec<f64> = (0..r)
        .map(|k| (rhs[k] - dot(&rows[k], psi)) / norms[k])
        .collect();
    let mut gram = vec![vec![0.0; r]; r];
    for a in 0..r {
        for b in 0..r {
            gram[a][b] = dot(&rows[a], &rows[b]) / (norms[a] * norms[b]);
        }
    }
    if let Some(lambda) = gauss_solve(gram, residual) {
        for (k, lk) in lambda.iter().enumerate() {
            for (j, slot) in psi.iter_mut().enumerate() {
                *slot += rows[k][j] / norms[k] * lk;
            }
        }
    }
}

/// Build the minimum-oscillation mollifier for a request.
pub fn build(req: &MollifierRequest) -> Result<Mollifier, MollifierError> {
    if req.order == 0 {
        return Err(MollifierError::BadParameter(
            "order must be at least 1".into(),
        ));
    }
    if !(req.support_radius.is_finite() && req.support_radius > 0.0) {
        return Err(MollifierError::BadParameter(format!(
            "support radius must be positive and finite, got {}",
            req.support_radius
        )));
    }
    if !(req.peak_factor.is_finite() && req.peak_factor >= 1.0) {
        return Err(MollifierError::BadParameter(format!(
            "peak factor must be at least 1 (unit mass needs amplitude 1/(2R)), got {}",
            req.peak_factor
        )));
    }
    if req.grid_points % 2 == 0 {
        return Err(MollifierError::GridNotOdd(req.grid_points));
    }
    let needed = 2 * req.order + 3;
    if req.grid_points < needed {
        return Err(MollifierError::GridTooSmall {
            order: req.order,
            points: req.grid_points,
            needed,
        });
    }

    let half_points = (req.grid_points - 1) / 2; // unknowns ψ_0..ψ_{M-1}
    let h = req.support_radius / half_points as f64;
    let bound = req.peak_factor / (2.0 * req.support_radius);

    // Odd moments vanish by symmetry; rows cover k = 0 and the even k ≤ n.
    let orders: Vec<usize> = std::iter::once(0)
        .chain((2..=req.order).step_by(2))
        .collect();
    let rows_psi: Vec<Vec<f64>> = orders
        .iter()
        .map(|&k| moment_row(k, half_points, h))
        .collect();
    let rhs_psi: Vec<f64> = orders.iter().map(|&k| if k == 0 { 1.0 } else { 0.0 }).collect();

    // Split ψ = p - q with 0 ≤ p, q ≤ bound and minimize the trapezoidal
    // upper bound Σ g₀(j)(p_j + q_j) on ∫|φ|. Rows are normalized to unit
    // peak coefficient so one set of tolerances fits every order.
    let cost_weights = moment_row(0, half_points, h);
    let mut rows = Vec::with_capacity(rows_psi.len());
    let mut rhs = Vec::with_capacity(rows_psi.len());
    for (row, b) in rows_psi.iter().zip(&rhs_psi) {
        let scale = row.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        let mut full: Vec<f64> = row.iter().map(|v| v / scale).collect();
        full.extend(row.iter().map(|v| -v / scale));
        rows.push(full);
        rhs.push(b / scale);
    }
    let cost_scale = cost_weights
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let mut cost: Vec<f64> = cost_weights.iter().map(|v| v / cost_scale).collect();
    cost.extend_from_within(..);

    let lp = LinearProgram {
        rows,
        rhs,
        cost,
        upper: vec![bound; 2 * half_points],
    };

    let x = match solve(&lp) {
        SimplexOutcome::Optimal { x, .. } => x,
        SimplexOutcome::Infeasible { .. } => {
            return Err(MollifierError::Infeasible {
                order: req.order,
                points: req.grid_points,
                bound,
            })
        }
        SimplexOutcome::IterationLimit => return Err(MollifierError::IterationLimit),
    };

    let mut psi: Vec<f64> = (0..half_points)
        .map(|j| x[j] - x[half_points + j])
        .collect();
    polish(&rows_psi, &rhs_psi, &mut psi);

    // Mirror onto the full grid; the boundary nodes carry the pinned zero.
    let m = half_points as i64;
    let xs: Vec<f64> = (-m..=m).map(|i| i as f64 * h).collect();
    let ys: Vec<f64> = (-m..=m)
        .map(|i| {
            let j = i.unsigned_abs() as usize;
            if j >= half_points {
                0.0
            } else {
                psi[j]
            }
        })
        .collect();
    let profile = PiecewiseLinear::new(xs, ys);

    // Report moments recomputed from the profile itself (an independent
    // antiderivative evaluation, not the hat weights the program was built
    // from), so the metadata double-checks the assembly.
    let achieved_moments: Vec<f64> = (0..=req.order).map(|k| profile.moment(k)).collect();
    let achieved_l1 = profile.abs_integral();

    Ok(Mollifier::new(
        req.order,
        profile,
        achieved_moments,
        achieved_l1,
        bound,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_weights_match_the_independent_moment_path() {
        // Arbitrary even grid function: Σ gₖ(j) ψ_j must equal the moment of
        // its piecewise-linear interpolant computed from antiderivatives.
        let half_points = 6;
        let h = 0.1;
        let psi = [1.7, -0.4, 0.9, 0.2, -1.1, 0.5];
        let m = half_points as i64;
        let xs: Vec<f64> = (-m..=m).map(|i| i as f64 * h).collect();
        let ys: Vec<f64> = (-m..=m)
            .map(|i| {
                let j = i.unsigned_abs() as usize;
                if j >= half_points {
                    0.0
                } else {
                    psi[j]
                }
            })
            .collect();
        let pl = PiecewiseLinear::new(xs, ys);
        for k in [0usize, 2, 4, 6] {
            let row = moment_row(k, half_points, h);
            let from_weights = dot(&row, &psi);
            let from_profile = pl.moment(k);
            assert!(
                (from_weights - from_profile).abs() < 1e-13,
                "k={k}: {from_weights} vs {from_profile}"
            );
        }
        for k in [1usize, 3, 5] {
            assert!(pl.moment(k).abs() < 1e-13, "odd moment {k} should cancel");
        }
    }

    #[test]
    fn trapezoid_weights_at_order_zero() {
        let row = moment_row(0, 4, 0.25);
        assert!((row[0] - 0.25).abs() < 1e-15);
        for w in &row[1..] {
            assert!((w - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn small_grid_build_meets_constraints() {
        let req = MollifierRequest::for_order(2).with_grid_points(11);
        let m = build(&req).unwrap();
        assert!((m.moment(0) - 1.0).abs() < 1e-12);
        assert!(m.moment(1).abs() < 1e-12);
        assert!(m.moment(2).abs() < 1e-12);
        let peak = m
            .profile()
            .values()
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        assert!(peak <= m.peak_bound() + 1e-9);
        assert!(m.achieved_l1() >= 1.0 - 1e-12);
    }

    #[test]
    fn validation_rejects_bad_requests() {
        let base = MollifierRequest::for_order(2);
        assert!(matches!(
            build(&MollifierRequest { order: 0, ..base.clone() }),
            Err(MollifierError::BadParameter(_))
        ));
        assert!(matches!(
            build(&base.clone().with_grid_points(10)),
            Err(MollifierError::GridNotOdd(10))
        ));
        assert!(matches!(
            build(&base.clone().with_grid_points(5)),
            Err(MollifierError::GridTooSmall { needed: 7, .. })
        ));
        assert!(matches!(
            build(&base.clone().with_peak_factor(0.5)),
            Err(MollifierError::BadParameter(_))
        ));
        assert!(matches!(
            build(&base.with_support_radius(-1.0)),
            Err(MollifierError::BadParameter(_))
        ));
    }

    #[test]
    fn infeasible_peak_bound_is_detected() {
        // peak_factor exactly 1 forces φ ≡ 1/(2R), which cannot satisfy
        // a vanishing second moment.
        let req = MollifierRequest::for_order(2)
            .with_grid_points(11)
            .with_peak_factor(1.0);
        assert!(matches!(build(&req), Err(MollifierError::Infeasible { .. })));
    }
}
