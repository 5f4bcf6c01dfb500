//! Error taxonomy for pairings, convolutions, and order fits.

use thiserror::Error;

/// Failure modes of distribution pairings, smoothing convolutions, and
/// power-law order estimation.
#[derive(Debug, Error)]
pub enum LabError {
    /// A sampled operand does not cover the support of the test function,
    /// so the pairing integral would read values the data never defines.
    #[error(
        "sampled data on [{data_lo}, {data_hi}] does not cover the test-function support [{need_lo}, {need_hi}]"
    )]
    Coverage {
        data_lo: f64,
        data_hi: f64,
        need_lo: f64,
        need_hi: f64,
    },

    /// Differentiation was requested on a form without a closed-form
    /// derivative (sampled test functions, piecewise-linear kernels).
    #[error("no closed-form derivative available: {0}")]
    UnsupportedDerivative(String),

    /// No convolution route is defined for this operand combination.
    #[error("unsupported convolution: {0}")]
    UnsupportedConvolution(String),

    /// A structural invariant of a distribution value was violated.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// The sample set cannot support a power-law fit: too few points,
    /// or a grid that does not span enough decades.
    #[error("degenerate order fit: {0}")]
    DegenerateFit(String),

    /// Every measured value sits at or below the configured noise floor,
    /// so no slope can be resolved. The quantities being compared are
    /// indistinguishable at quadrature precision.
    #[error("measurements at the noise floor: {0}")]
    AtNoiseFloor(String),

    /// Building a smoothing kernel failed upstream.
    #[error("kernel construction failed: {0}")]
    Construction(String),

    /// A scalar argument outside its documented domain.
    #[error("bad parameter: {0}")]
    BadParameter(String),
}
