//! Distribution pairings, smoothing convolutions, and convergence-order
//! experiments over compactly supported smooth test functions.
//!
//! The crate provides:
//!
//! * [`TestFunction`]: bump-type smooth functions q(u)·exp(-1/(1-u²)) with
//!   exact derivatives of every order, plus sampled data,
//! * [`Distribution`]: point masses, steps, polynomial densities, sampled
//!   locally integrable data, their distributional derivatives, and finite
//!   linear combinations, with exact pairing rules (derivatives transpose
//!   onto the test function with alternating sign),
//! * [`convolve`]: smoothing T∗φ by piecewise-linear or analytic kernels
//!   with exact special-case routes (a point mass shifts the kernel, a
//!   step integrates it, a polynomial collapses onto kernel moments),
//! * [`fit_slope`] / [`OrderEstimate`]: power-law order extraction from
//!   (ε, value) tables with a documented noise floor,
//! * experiment drivers: regularization error tables against shrinking
//!   mollifiers, polynomial-reproduction defects, smoothing-embedding
//!   orders, weak-equality verdicts over test panels, the kernel-dependent
//!   step-times-spike product, and the travelling-step balance identities.

mod convolve;
mod distribution;
mod error;
mod experiments;
mod order;
mod poly;
pub mod quad;
mod testfn;

pub use convolve::{convolve, Convolution, Kernel};
pub use distribution::{Distribution, STEP_AT_JUMP};
pub use error::LabError;
pub use experiments::{
    basic_mollifier, polynomial_reproduction_check, regularization_report,
    regularized_product_experiment,
    shock_conservation_check, shock_weak_solution_residual, smooth_embedding_scan,
    weak_equality_check, ProbeDefect, ProductTable, RegularizationReport, RegularizationRow,
    ReproductionReport, ShockBalance, TauOutcome, WeakEqualityKind, WeakEqualityVerdict,
};
pub use order::{
    fit_slope, fit_slope_with_floor, log_grid, probe_grid, OrderEstimate, NOISE_FLOOR,
};
pub use testfn::{standard_panel, BumpPoly, TestFunction};
