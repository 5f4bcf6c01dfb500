//! Power-law order estimation from (eps, value) sample tables.
//!
//! Measured convergence orders are extracted by least squares on
//! log |value| against log eps. Values at or below a noise floor are
//! excluded from the fit (they measure quadrature and rounding error, not
//! the model), but stay in the sample record.

use crate::error::LabError;
use serde::Serialize;

/// Default magnitude below which measurements count as numerical noise
/// and are excluded from slope fits.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Minimum decade span the eps grid must cover for a fit to be offered.
const MIN_DECADES: f64 = 2.0;

/// A fitted asymptotic order: value ~ C * eps^slope.
#[derive(Debug, Clone, Serialize)]
pub struct OrderEstimate {
    /// The raw (eps, value) table, fit-excluded points included.
    pub samples: Vec<(f64, f64)>,
    /// Fitted exponent of eps.
    pub slope: f64,
    /// Fitted log-intercept (natural log of the prefactor).
    pub intercept: f64,
    /// Coefficient of determination of the log-log regression.
    pub r_squared: f64,
    /// Number of samples that survived the noise-floor cut.
    pub points_used: usize,
}

impl OrderEstimate {
    /// A fit is conclusive when the regression explains the data.
    pub fn is_conclusive(&self) -> bool {
        self.r_squared >= 0.98
    }
}

/// Fits the slope with the default noise floor.
pub fn fit_slope(samples: &[(f64, f64)]) -> Result<OrderEstimate, LabError> {
    fit_slope_with_floor(samples, NOISE_FLOOR)
}

/// Fits log |value| = intercept + slope * log eps by least squares over
/// the samples with |value| above `floor`.
pub fn fit_slope_with_floor(
    samples: &[(f64, f64)],
    floor: f64,
) -> Result<OrderEstimate, LabError> {
    if samples.len() < 3 {
        return Err(LabError::DegenerateFit(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|&(e, _)| e <= 0.0 || !e.is_finite()) {
        return Err(LabError::DegenerateFit(
            "eps values must be positive and finite".into(),
        ));
    }
    let min_eps = samples.iter().map(|&(e, _)| e).fold(f64::INFINITY, f64::min);
    let max_eps = samples.iter().map(|&(e, _)| e).fold(0.0, f64::max);
    let decades = (max_eps / min_eps).log10();
    if decades < MIN_DECADES - 1e-9 {
        return Err(LabError::DegenerateFit(format!(
            "eps grid spans {decades:.2} decades, need at least {MIN_DECADES}"
        )));
    }

    let usable: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(_, v)| v.abs() > floor)
        .collect();
    if usable.len() < 2 {
        return Err(LabError::AtNoiseFloor(format!(
            "{} of {} samples exceed the floor {floor:.1e}",
            usable.len(),
            samples.len()
        )));
    }

    let n = usable.len() as f64;
    let xs: Vec<f64> = usable.iter().map(|&(e, _)| e.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|&(_, v)| v.abs().ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    if sxx <= 0.0 {
        return Err(LabError::DegenerateFit(
            "all usable samples share one eps".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let fit = intercept + slope * x;
            (y - fit) * (y - fit)
        })
        .sum();
    let r_squared = if ss_tot <= 1e-30 {
        if ss_res <= 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    if !slope.is_finite() {
        return Err(LabError::DegenerateFit("slope is not finite".into()));
    }
    Ok(OrderEstimate {
        samples: samples.to_vec(),
        slope,
        intercept,
        r_squared,
        points_used: usable.len(),
    })
}

/// Geometric grid from `lo` to `hi` with the given resolution, ascending.
pub fn log_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo, "need 0 < lo < hi");
    assert!(points_per_decade > 0, "need at least one point per decade");
    let decades = (hi / lo).log10();
    let count = (decades * points_per_decade as f64).round().max(1.0) as usize;
    let ratio = (hi / lo).powf(1.0 / count as f64);
    let mut out = Vec::with_capacity(count + 1);
    let mut x = lo;
    for _ in 0..count {
        out.push(x);
        x *= ratio;
    }
    out.push(hi);
    out
}

/// Evenly spaced probe points over [lo, hi], endpoints included.
pub fn probe_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && hi > lo);
    let h = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + i as f64 * h).collect()
}

/// Solves a small dense linear system by Gaussian elimination with
/// partial pivoting; used for the low-degree extrapolation fits.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let acc: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - acc) / a[row][row];
    }
    Some(x)
}
