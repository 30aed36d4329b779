use crate::rational::Rational;

/// Precondition violations reported by the fallible operations.
///
/// Everything else in the crate is total. Panics are reserved for programmer
/// errors (indexing past a stored window, constructing a rational with a zero
/// denominator), never for legitimate mathematical input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The operation only makes sense for series with zero constant term.
    #[error("{op} requires a zero constant term, found {found}")]
    ConstantTermNotZero { op: &'static str, found: Rational },

    /// Reciprocals exist exactly when the constant term is a unit.
    #[error("reciprocal requires a nonzero constant term")]
    ConstantTermZero,

    /// Logarithms are taken relative to the constant term 1.
    #[error("log requires constant term 1, found {found}")]
    ConstantTermNotOne { found: Rational },

    /// The operation needs a series of the shape `x + O(x^2)`.
    #[error(
        "{op} requires a series of the form x + O(x^2); \
         constant term is {constant}, linear term is {linear}"
    )]
    NotNormalized {
        op: &'static str,
        constant: Rational,
        linear: Rational,
    },

    /// Queried exponent sits below the stored window; the coefficient is
    /// identically zero by construction, not merely unknown.
    #[error(
        "coefficient of exponent {k} lies below the window \
         (lowest stored exponent {lowest}) and is identically zero"
    )]
    BelowWindow { k: i64, lowest: i64 },

    /// Queried exponent sits above the truncation point; nothing is known
    /// about it.
    #[error(
        "coefficient of exponent {k} lies beyond the truncation \
         (top stored exponent {top}) and is not determined"
    )]
    BeyondTruncation { k: i64, top: i64 },

    /// A coefficient table must at least reach its own leading exponent.
    #[error("table window must satisfy top >= -n; got top {top} with -n = {lowest}")]
    WindowTooSmall { top: i64, lowest: i64 },

    /// Residues of `e^{my}/(e^y - 1)^n` require an actual pole.
    #[error("power of the pole must be positive, got n = {n}")]
    NonPositivePower { n: i64 },

    /// An interpolated polynomial disagreed with the table it claims to
    /// describe. Seeing this error means the polynomiality property failed.
    #[error(
        "polynomial for offset {j} fails validation at n = {n}: \
         table value {expected}, polynomial value {got}"
    )]
    InterpolationMismatch {
        j: u32,
        n: i64,
        expected: Rational,
        got: Rational,
    },

    /// Commutator tables only carry entries at or above the diagonal `k = n`;
    /// rows below it are identically zero and are not emitted.
    #[error("table rows must start at k >= n = {n}; got k start {k_start}")]
    RowsBelowDiagonal { n: i64, k_start: i64 },
}
