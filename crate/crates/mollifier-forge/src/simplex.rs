//! Bounded-variable revised simplex for equality-constrained programs
//!
//!   min cᵀx   s.t.  Ax = b,  0 ≤ x ≤ u,
//!
//! written for the moment systems in this crate: a handful of equality rows
//! against hundreds or thousands of variables. The basis is therefore tiny
//! and is refactored from scratch every iteration by dense elimination; no
//! factor updates, no sparsity machinery. Nonbasic variables rest at either
//! bound, the ratio test admits bound flips, and both entering and leaving
//! choices use Bland's smallest-index rule so the method terminates even on
//! the degenerate vertices these very symmetric programs produce.
//!
//! Phase one minimizes the total infeasibility carried by one artificial
//! variable per row; artificials are then pinned to zero (upper bound set to
//! their value) and the structural objective takes over.

const TOL_DUAL: f64 = 1e-9;
const TOL_PIV: f64 = 1e-11;
const RATIO_EPS: f64 = 1e-10;
const TOL_FEAS: f64 = 1e-8;
const MAX_ITERATIONS: usize = 200_000;

pub(crate) struct LinearProgram {
    /// Equality rows of A, each `nvars` long.
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub cost: Vec<f64>,
    /// Per-variable upper bound; every lower bound is zero.
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SimplexOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    /// Phase one could not clear the artificials; the leftover infeasibility
    /// is reported for diagnostics.
    Infeasible { residual: f64 },
    IterationLimit,
}

/// Dense Gaussian elimination with partial pivoting; `None` on a singular
/// system.
pub(crate) fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-13 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

struct Solver {
    nrows: usize,
    /// Column-major constraint matrix including artificial columns.
    cols: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    upper: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    at_upper: Vec<bool>,
}

enum RunResult {
    Converged,
    OutOfIterations,
}

impl Solver {
    fn basis_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.nrows)
            .map(|i| self.basis.iter().map(|&v| self.cols[v][i]).collect())
            .collect()
    }

    /// Solve B x_B = b - Σ (nonbasic-at-upper columns) · their bound.
    fn basic_values(&self) -> Option<Vec<f64>> {
        let mut rhs = self.rhs.clone();
        for v in 0..self.cols.len() {
            if !self.in_basis[v] && self.at_upper[v] {
                for i in 0..self.nrows {
                    rhs[i] -= self.cols[v][i] * self.upper[v];
                }
            }
        }
        gauss_solve(self.basis_matrix(), rhs)
    }

    fn duals(&self) -> Option<Vec<f64>> {
        let bm = self.basis_matrix();
        let transposed = (0..self.nrows)
            .map(|i| (0..self.nrows).map(|j| bm[j][i]).collect())
            .collect();
        let cb = self.basis.iter().map(|&v| self.cost[v]).collect();
        gauss_solve(transposed, cb)
    }

    fn full_solution(&self) -> Option<Vec<f64>> {
        let xb = self.basic_values()?;
        let mut x = vec![0.0; self.cols.len()];
        for (v, slot) in x.iter_mut().enumerate() {
            if !self.in_basis[v] && self.at_upper[v] {
                *slot = self.upper[v];
            }
        }
        for (pos, &v) in self.basis.iter().enumerate() {
            x[v] = xb[pos];
        }
        Some(x)
    }

    fn run(&mut self) -> RunResult {
        for _ in 0..MAX_ITERATIONS {
            let (xb, y) = match (self.basic_values(), self.duals()) {
                (Some(xb), Some(y)) => (xb, y),
                // A singular basis cannot arise from pivots with nonzero
                // pivot elements; treat it as a failed run rather than
                // poisoning the caller with a panic.
                _ => return RunResult::OutOfIterations,
            };

            // Pricing, smallest eligible index first.
            let mut entering = None;
            for v in 0..self.cols.len() {
                if self.in_basis[v] || self.upper[v] <= 0.0 {
                    continue;
                }
                let reduced = self.cost[v]
                    - y.iter()
                        .zip(&self.cols[v])
                        .map(|(yi, ai)| yi * ai)
                        .sum::<f64>();
                let eligible = if self.at_upper[v] {
                    reduced > TOL_DUAL
                } else {
                    reduced < -TOL_DUAL
                };
                if eligible {
                    entering = Some(v);
                    break;
                }
            }
            let e = match entering {
                Some(e) => e,
                None => return RunResult::Converged,
            };

            let dir = if self.at_upper[e] { -1.0 } else { 1.0 };
            let w = match gauss_solve(self.basis_matrix(), self.cols[e].clone()) {
                Some(w) => w,
                None => return RunResult::OutOfIterations,
            };

            // Ratio test. Basic value i moves by -dir·wᵢ per unit step.
            let mut t_pivot = f64::INFINITY;
            let mut leaving: Option<(usize, bool)> = None; // (basis position, exits at upper)
            for i in 0..self.nrows {
                let delta = -dir * w[i];
                let candidate = if delta < -TOL_PIV {
                    Some((xb[i].max(0.0) / -delta, false))
                } else if delta > TOL_PIV && self.upper[self.basis[i]].is_finite() {
                    Some(((self.upper[self.basis[i]] - xb[i]).max(0.0) / delta, true))
                } else {
                    None
                };
                if let Some((t, to_upper)) = candidate {
                    let strictly_better = t < t_pivot - RATIO_EPS;
                    let tie_with_smaller_index = t < t_pivot + RATIO_EPS
                        && leaving.is_some_and(|(pos, _)| self.basis[i] < self.basis[pos]);
                    if strictly_better || tie_with_smaller_index || leaving.is_none() && t.is_finite() {
                        t_pivot = t;
                        leaving = Some((i, to_upper));
                    }
                }
            }

            let t_flip = self.upper[e]; // distance between the two bounds
            if t_flip < t_pivot - RATIO_EPS || leaving.is_none() {
                if !t_flip.is_finite() {
                    // Unbounded ray; cannot occur with finite structural
                    // bounds but is handled for completeness.
                    return RunResult::OutOfIterations;
                }
                self.at_upper[e] = !self.at_upper[e];
                continue;
            }

            let (pos, to_upper) = leaving.unwrap();
            let lv = self.basis[pos];
            self.in_basis[lv] = false;
            self.at_upper[lv] = to_upper;
            self.basis[pos] = e;
            self.in_basis[e] = true;
            self.at_upper[e] = false;
        }
        RunResult::OutOfIterations
    }
}

pub(crate) fn solve(lp: &LinearProgram) -> SimplexOutcome {
    let nrows = lp.rows.len();
    let nstruct = lp.cost.len();
    debug_assert!(lp.rows.iter().all(|r| r.len() == nstruct));
    debug_assert_eq!(lp.rhs.len(), nrows);
    debug_assert_eq!(lp.upper.len(), nstruct);

    let mut cols: Vec<Vec<f64>> = (0..nstruct)
        .map(|v| lp.rows.iter().map(|r| r[v]).collect())
        .collect();
    let mut upper = lp.upper.clone();
    // One artificial per row, signed so it starts at |rhs| ≥ 0.
    for k in 0..nrows {
        let mut col = vec![0.0; nrows];
        col[k] = if lp.rhs[k] < 0.0 { -1.0 } else { 1.0 };
        cols.push(col);
        upper.push(f64::INFINITY);
    }

    let mut phase1_cost = vec![0.0; nstruct];
    phase1_cost.extend(std::iter::repeat(1.0).take(nrows));

    let mut solver = Solver {
        nrows,
        cols,
        rhs: lp.rhs.clone(),
        cost: phase1_cost,
        upper,
        basis: (nstruct..nstruct + nrows).collect(),
        in_basis: (0..nstruct + nrows).map(|v| v >= nstruct).collect(),
        at_upper: vec![false; nstruct + nrows],
    };

    if matches!(solver.run(), RunResult::OutOfIterations) {
        return SimplexOutcome::IterationLimit;
    }
    let x1 = match solver.full_solution() {
        Some(x) => x,
        None => return SimplexOutcome::IterationLimit,
    };
    let residual: f64 = x1[nstruct..].iter().map(|v| v.abs()).sum();
    let feas_scale = 1.0 + lp.rhs.iter().fold(0.0_f64, |m, b| m.max(b.abs()));
    if residual > TOL_FEAS * feas_scale {
        return SimplexOutcome::Infeasible { residual };
    }

    // Pin the artificials at zero and switch to the real objective. A
    // degenerate artificial may stay basic at value zero; pinned bounds keep
    // it there, so it contributes nothing.
    for v in nstruct..nstruct + nrows {
        solver.upper[v] = 0.0;
    }
    solver.cost = lp.cost.clone();
    solver.cost.extend(std::iter::repeat(0.0).take(nrows));

    if matches!(solver.run(), RunResult::OutOfIterations) {
        return SimplexOutcome::IterationLimit;
    }
    match solver.full_solution() {
        Some(full) => {
            let x = full[..nstruct].to_vec();
            let objective = x.iter().zip(&lp.cost).map(|(xi, ci)| xi * ci).sum();
            SimplexOutcome::Optimal { x, objective }
        }
        None => SimplexOutcome::IterationLimit,
    }
}
