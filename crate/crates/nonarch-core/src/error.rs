use thiserror::Error;

/// Errors from partial field operations.
///
/// Everything that can fail does so for a stated algebraic reason; no
/// operation silently substitutes a default value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// Inversion or division by an element with no represented terms.
    #[error("division by zero")]
    DivisionByZero,

    /// Square roots exist in the model only at even valuations: `ρ` itself
    /// has no square root because `ρ^(1/2)` is not an integer power.
    #[error("no square root at odd valuation {0}: half-integer powers of the scale are not in the model")]
    OddValuation(i64),

    /// Square roots of non-positive elements are outside the ordered field.
    #[error("square root of a non-positive element")]
    NotPositive,

    /// In the exact coefficient domain the leading coefficient must itself be
    /// a rational square; the model contains no adjoined radicals.
    #[error("leading coefficient {0} is not a square in the exact coefficient domain")]
    NotASquare(String),

    /// Complex values admit no order compatible with the arithmetic: any
    /// ordering forces i^2 = -1 to be a positive element.
    #[error("complex values are unordered: i^2 = -1 rules out any compatible total order")]
    Unordered,

    /// Zero sits in every null class, so classification is reserved for
    /// nonzero values; callers treat zero separately.
    #[error("zero has no scale classification")]
    ZeroUnclassifiable,

    /// An infinitely large value has no decomposition `r + dx` with real `r`
    /// and infinitesimal `dx`.
    #[error("no finite asymptotic split: the value is infinitely large")]
    InfinitelyLarge,
}
