//! Construction of compactly supported mollifiers with vanishing moments.
//!
//! A mollifier of order n here is a continuous, even, piecewise-linear
//! function φ supported on [-R, R] with
//!
//!   ∫ φ = 1,   ∫ xᵏ φ(x) dx = 0 for k = 1..n.
//!
//! Such a φ cannot be non-negative once n ≥ 2 (a probability density has a
//! positive second moment), so it must oscillate, and the interesting
//! quantity is how little total variation the constraints force: we pick,
//! among all grid functions satisfying the moment system, one minimizing a
//! trapezoidal surrogate of ∫|φ|. That is a linear program, solved exactly
//! enough by a bounded-variable revised simplex method and then polished by
//! a tiny least-squares correction so the moment residuals sit at machine
//! precision rather than simplex tolerance.
//!
//! Scaling the result, φ_ε(x) = φ(x/ε)/ε, gives a delta sequence whose
//! pairings with smooth test functions converge at the rate ε^(n+1) set by
//! the first non-vanishing moment; the checks for that live downstream
//! where distributions and test functions are available.

mod builder;
mod mollifier;
mod piecewise;
mod simplex;

pub use builder::{build, MollifierRequest};
pub use mollifier::{Mollifier, MollifierMetadata};
pub use piecewise::PiecewiseLinear;

use thiserror::Error;

/// Failures of the construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MollifierError {
    #[error("grid must have an odd number of points so a node sits at the origin, got {0}")]
    GridNotOdd(usize),

    #[error("grid of {points} points cannot carry {order} vanishing moments; need at least {needed}")]
    GridTooSmall {
        order: usize,
        points: usize,
        needed: usize,
    },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("moment system infeasible for order {order} on {points} points with peak bound {bound}")]
    Infeasible {
        order: usize,
        points: usize,
        bound: f64,
    },

    #[error("simplex iteration limit reached; the grid or bounds make the program degenerate")]
    IterationLimit,
}
