//! Closed-form Gaussian moments. Every integral in this crate reduces to
//! ∫ x^{2k} e^{-a x²} dx, which has the exact value
//! ((2k-1)!!/(2a)^k)·√(π/a); odd moments vanish by parity.

use crate::error::SolitonError;

/// Integration window for quadrature cross-checks: e^{-y²} carries less
/// than e^{-144} of its mass beyond |y| = 12, far below every tolerance
/// used here, so [-12, 12] stands in for the whole line.
pub const GAUSS_WINDOW: f64 = 12.0;

/// (2k-1)!! with the empty product (-1)!! = 1.
fn double_factorial_odd(k: u32) -> f64 {
    (1..=k).map(|j| (2 * j - 1) as f64).product()
}

/// ∫ x^{2k} e^{-a x²} dx over the real line.
pub fn gaussian_moment(k: u32, a: f64) -> Result<f64, SolitonError> {
    if a <= 0.0 {
        return Err(SolitonError::BadParameter(format!(
            "gaussian moment needs a > 0, got {a}"
        )));
    }
    Ok(double_factorial_odd(k) / (2.0 * a).powi(k as i32) * (std::f64::consts::PI / a).sqrt())
}
