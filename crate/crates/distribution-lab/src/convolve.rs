//! Smoothing convolutions T * phi with exact special-case routes.
//!
//! The evaluation rules per operand:
//! * a point mass shifts the kernel: (delta_c * phi)(x) = phi(x - c),
//! * a step integrates it: (H_o * phi)(x) = Phi(x - o) with Phi the
//!   cumulative of phi,
//! * a polynomial collapses onto kernel moments:
//!   (P * phi)(x) = sum_m P^(m)(x) (-1)^m mu_m / m!,
//! * sampled data convolves by quadrature,
//! * a derivative operand moves onto the kernel: (d^k T) * phi = T * phi^(k),
//! * combinations are linear.
//!
//! The first three routes are exact up to rounding (the cumulative and the
//! moments of a piecewise-linear kernel are closed forms), which is what
//! lets downstream experiments measure genuine model error rather than
//! smoothing-quadrature error.

use crate::distribution::Distribution;
use crate::error::LabError;
use crate::poly;
use crate::quad;
use crate::testfn::{BumpPoly, TestFunction};
use mollifier_forge::{Mollifier, PiecewiseLinear};

/// A smoothing kernel: piecewise-linear data (mollifier profiles) or an
/// analytic bump (when derivative operands are in play).
#[derive(Debug, Clone)]
pub enum Kernel {
    Piecewise(PiecewiseLinear),
    Smooth(BumpPoly),
}

impl Kernel {
    pub fn from_profile(profile: PiecewiseLinear) -> Self {
        Kernel::Piecewise(profile)
    }

    /// The unit-support profile of a constructed mollifier.
    pub fn from_mollifier(m: &Mollifier) -> Self {
        Kernel::Piecewise(m.profile().clone())
    }

    /// The delta-family member phi_eps of a constructed mollifier.
    pub fn from_mollifier_scaled(m: &Mollifier, eps: f64) -> Self {
        Kernel::Piecewise(m.scale_to_delta(eps))
    }

    pub fn smooth(bump: BumpPoly) -> Self {
        Kernel::Smooth(bump)
    }

    /// Adopts a test function as a kernel (bump stays analytic, sampled
    /// data becomes a piecewise-linear kernel).
    pub fn from_test_function(tf: &TestFunction) -> Self {
        match tf {
            TestFunction::Bump(b) => Kernel::Smooth(b.clone()),
            TestFunction::Sampled(p) => Kernel::Piecewise(p.clone()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Kernel::Piecewise(p) => p.eval(x),
            Kernel::Smooth(b) => b.eval(x),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Kernel::Piecewise(p) => p.support(),
            Kernel::Smooth(b) => b.support(),
        }
    }

    /// Cell edges of the kernel, endpoints included.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Kernel::Piecewise(p) => p.breakpoints().to_vec(),
            Kernel::Smooth(b) => {
                let (lo, hi) = b.support();
                vec![lo, hi]
            }
        }
    }

    /// Integral from the left support edge: exact for piecewise-linear
    /// kernels, quadrature for analytic bumps.
    pub fn cumulative(&self, x: f64) -> f64 {
        match self {
            Kernel::Piecewise(p) => p.cumulative(x),
            Kernel::Smooth(b) => {
                let (lo, hi) = b.support();
                if x <= lo {
                    return 0.0;
                }
                quad::integrate(|t| b.eval(t), &[lo, x.min(hi)])
            }
        }
    }

    /// k-th raw moment of the kernel.
    pub fn moment(&self, k: usize) -> f64 {
        match self {
            Kernel::Piecewise(p) => p.moment(k),
            Kernel::Smooth(b) => {
                let (lo, hi) = b.support();
                quad::integrate(|t| t.powi(k as i32) * b.eval(t), &[lo, 0.5 * (lo + hi), hi])
            }
        }
    }

    /// Exact kernel derivative; only the analytic form has one.
    pub fn derivative(&self) -> Result<Kernel, LabError> {
        match self {
            Kernel::Smooth(b) => Ok(Kernel::Smooth(b.derivative())),
            Kernel::Piecewise(_) => Err(LabError::UnsupportedConvolution(
                "derivative operands need an analytic kernel; piecewise-linear kernels have no smooth derivative".into(),
            )),
        }
    }

    pub fn translated(&self, dx: f64) -> Self {
        match self {
            Kernel::Piecewise(p) => Kernel::Piecewise(p.translated(dx)),
            Kernel::Smooth(b) => Kernel::Smooth(b.translated(dx)),
        }
    }
}

/// The smoothed function T * phi, evaluable anywhere and samplable onto a
/// grid.
#[derive(Debug, Clone)]
pub struct Convolution {
    kind: ConvKind,
}

#[derive(Debug, Clone)]
enum ConvKind {
    /// (delta_c * phi)(x) = phi(x - center).
    Shifted { kernel: Kernel, center: f64 },
    /// (H_o * phi)(x) = Phi(x - offset).
    Cumulative { kernel: Kernel, offset: f64 },
    /// Exact polynomial image of a polynomial operand.
    Poly { coefficients: Vec<f64> },
    /// Quadrature route for sampled data (extended by zero off its span).
    Data {
        profile: PiecewiseLinear,
        kernel: Kernel,
    },
    Sum { parts: Vec<(f64, Convolution)> },
}

/// Builds the smoothed function T * phi.
pub fn convolve(t: &Distribution, kernel: &Kernel) -> Result<Convolution, LabError> {
    let kind = match t {
        Distribution::DiracDelta { center } => ConvKind::Shifted {
            kernel: kernel.clone(),
            center: *center,
        },
        Distribution::Heaviside { offset } => ConvKind::Cumulative {
            kernel: kernel.clone(),
            offset: *offset,
        },
        Distribution::Polynomial { coefficients } => {
            let mut out: Vec<f64> = Vec::new();
            let mut deriv = coefficients.clone();
            let mut m = 0usize;
            while !deriv.is_empty() {
                let weight = if m % 2 == 0 { 1.0 } else { -1.0 };
                let scale = weight * kernel.moment(m) / poly::factorial(m);
                poly::add_scaled(&mut out, &deriv, scale);
                deriv = poly::derivative(&deriv);
                m += 1;
            }
            ConvKind::Poly { coefficients: out }
        }
        Distribution::SampledLocallyIntegrable(profile) => ConvKind::Data {
            profile: profile.clone(),
            kernel: kernel.clone(),
        },
        Distribution::DerivativeOf { base, order } => {
            let mut k = kernel.clone();
            for _ in 0..*order {
                k = k.derivative()?;
            }
            return convolve(base, &k);
        }
        Distribution::Combination(terms) => {
            let mut parts = Vec::with_capacity(terms.len());
            for (c, d) in terms {
                parts.push((*c, convolve(d, kernel)?));
            }
            ConvKind::Sum { parts }
        }
    };
    Ok(Convolution { kind })
}

impl Convolution {
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            ConvKind::Shifted { kernel, center } => kernel.eval(x - center),
            ConvKind::Cumulative { kernel, offset } => kernel.cumulative(x - offset),
            ConvKind::Poly { coefficients } => poly::eval(coefficients, x),
            ConvKind::Data { profile, kernel } => {
                let (flo, fhi) = profile.support();
                let (klo, khi) = kernel.support();
                let lo = flo.max(x - khi);
                let hi = fhi.min(x - klo);
                if lo >= hi {
                    return 0.0;
                }
                let mut breaks: Vec<f64> = vec![lo, hi];
                breaks.extend(
                    profile
                        .breakpoints()
                        .iter()
                        .copied()
                        .filter(|&t| t > lo && t < hi),
                );
                breaks.extend(
                    kernel
                        .breakpoints()
                        .iter()
                        .map(|&kb| x - kb)
                        .filter(|&t| t > lo && t < hi),
                );
                quad::integrate(|t| profile.eval(t) * kernel.eval(x - t), &breaks)
            }
            ConvKind::Sum { parts } => parts.iter().map(|(c, p)| c * p.eval(x)).sum(),
        }
    }

    /// Samples onto a strictly increasing grid.
    pub fn sample(&self, grid: &[f64]) -> PiecewiseLinear {
        let values = grid.iter().map(|&x| self.eval(x)).collect();
        PiecewiseLinear::new(grid.to_vec(), values)
    }

    /// Exact derivative of the smoothed function; the cumulative route
    /// differentiates back to a shift, the others move onto the kernel.
    pub fn derivative(&self) -> Result<Convolution, LabError> {
        let kind = match &self.kind {
            ConvKind::Shifted { kernel, center } => ConvKind::Shifted {
                kernel: kernel.derivative()?,
                center: *center,
            },
            ConvKind::Cumulative { kernel, offset } => ConvKind::Shifted {
                kernel: kernel.clone(),
                center: *offset,
            },
            ConvKind::Poly { coefficients } => ConvKind::Poly {
                coefficients: poly::derivative(coefficients),
            },
            ConvKind::Data { profile, kernel } => ConvKind::Data {
                profile: profile.clone(),
                kernel: kernel.derivative()?,
            },
            ConvKind::Sum { parts } => {
                let mut out = Vec::with_capacity(parts.len());
                for (c, p) in parts {
                    out.push((*c, p.derivative()?));
                }
                ConvKind::Sum { parts: out }
            }
        };
        Ok(Convolution { kind })
    }

    /// Kink locations of the smoothed function inside (lo, hi).
    fn breakpoints_within(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        match &self.kind {
            ConvKind::Shifted { kernel, center } => {
                out.extend(
                    kernel
                        .breakpoints()
                        .iter()
                        .map(|&b| b + center)
                        .filter(|&x| x > lo && x < hi),
                );
            }
            ConvKind::Cumulative { kernel, offset } => {
                out.extend(
                    kernel
                        .breakpoints()
                        .iter()
                        .map(|&b| b + offset)
                        .filter(|&x| x > lo && x < hi),
                );
            }
            ConvKind::Poly { .. } => {}
            ConvKind::Data { profile, .. } => {
                out.extend(
                    profile
                        .breakpoints()
                        .iter()
                        .copied()
                        .filter(|&x| x > lo && x < hi),
                );
            }
            ConvKind::Sum { parts } => {
                for (_, p) in parts {
                    p.breakpoints_within(lo, hi, out);
                }
            }
        }
    }

    /// The pairing (T * phi)[tau] by quadrature over tau's support.
    pub fn pair_with(&self, tau: &TestFunction) -> Result<f64, LabError> {
        let (lo, hi) = tau.support();
        let mut breaks = vec![lo, hi];
        breaks.extend(tau.interior_breakpoints());
        self.breakpoints_within(lo, hi, &mut breaks);
        Ok(quad::integrate(|x| self.eval(x) * tau.eval(x), &breaks))
    }
}
