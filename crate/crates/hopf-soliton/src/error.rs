//! Error type for profile solving and wave verification.

use thiserror::Error;

/// Everything that can go wrong while solving for a profile or checking a
/// wave against the Hopf equation.
#[derive(Debug, Error)]
pub enum SolitonError {
    /// Newton failed to reach the residual target from every restart.
    #[error("moment system not solved: best residual {best_residual:.3e} after {restarts} restarts")]
    NoSolution { best_residual: f64, restarts: usize },

    /// A precondition on the arguments failed.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// The direct and reduced residual quadratures disagree beyond the
    /// cross-check tolerance, so neither value can be trusted.
    #[error("residual cross-check failed: direct {direct:.6e} vs reduced {reduced:.6e}")]
    Inconsistent { direct: f64, reduced: f64 },

    /// Characteristics cease to define a classical solution at this time.
    #[error("no classical solution: t = {t} is not below the shock time {t_shock:.6}")]
    BeyondShockTime { t: f64, t_shock: f64 },

    /// The implicit characteristic equation did not converge.
    #[error("characteristic iteration failed at x = {x}, t = {t}")]
    CharacteristicDiverged { x: f64, t: f64 },

    /// Report files could not be written.
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}
