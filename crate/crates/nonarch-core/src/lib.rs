//! Arithmetic in a computable non-Archimedean ordered field.
//!
//! The model is the field of truncated formal Laurent series in a positive
//! infinitesimal `ρ`:
//!
//! ```text
//! x = a_m ρ^m + a_{m+1} ρ^{m+1} + ... + a_K ρ^K + O(ρ^{K+1})
//! ```
//!
//! with integer exponents, a finite valuation `m` (the least exponent with a
//! nonzero coefficient), and a per-value truncation order `K` recording where
//! certified information ends. Ordering is by the sign of the leading
//! coefficient: `ρ` is positive yet smaller than every positive rational, so
//! `1/ρ` exceeds every natural number. Convergence never enters — the series
//! are formal, and [`Laurent`] arithmetic is exact on the represented terms.
//!
//! Coefficients come from a [`Coefficient`] domain: arbitrary-precision
//! rationals for algebraic work (field-axiom checks, order embeddings) or
//! `f64` for experiment pipelines. The two never mix inside one value; pick
//! the domain with the type parameter.
//!
//! Beyond the field operations the crate provides:
//!
//! * scale classification ([`Laurent::classify`]) into infinitesimal /
//!   finite-appreciable / infinitely-large together with the ρ-moderateness
//!   refinement,
//! * standard parts and the finite asymptotic split `x = r + dx`
//!   ([`Laurent::standard_part`], [`Laurent::asymptotic_split`]),
//! * complexified values ([`ComplexLaurent`]) with modulus and componentwise
//!   standard parts, and a demonstration of why they cannot be ordered,
//! * the ordered field of rational functions ([`RationalFunction`]) with its
//!   order-preserving expansion into the Laurent model.

mod coefficient;
mod complex;
mod error;
mod laurent;
mod ratfunc;

pub use coefficient::Coefficient;
pub use complex::ComplexLaurent;
pub use error::FieldError;
pub use laurent::{
    Classification, Laurent, RhoClass, Scale, StandardPart, DEFAULT_TRUNCATION,
};
pub use ratfunc::RationalFunction;

/// Exact rational Laurent value, the domain for algebraic verification.
pub type ExactLaurent = Laurent<num::BigRational>;

/// Floating-point Laurent value, the domain for experiment pipelines.
pub type FloatLaurent = Laurent<f64>;
