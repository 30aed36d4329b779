//! Exact formal power series laboratory.
//!
//! Everything here is computed over arbitrary-precision rationals: no
//! floats, no tolerances, no "close enough". The crate is organized in four
//! layers:
//!
//! * [`rational`] plus the series kernel ([`PowerSeries`], [`LaurentSeries`]):
//!   truncated series arithmetic that tracks how far each result is valid and
//!   never reports a coefficient beyond that point.
//! * [`changevar`]: decomposition of a normalized change of variable
//!   `f = x + a_2 x^2 + ...` into an ordered product of exponentials of the
//!   derivations `b_j x^{j+1} d/dx`, the single-exponential sum form of the
//!   same data, and consistency checks between the two.
//! * [`bernoulli`]: Laurent coefficient tables `q_k` of `e^{mx}/(e^x - 1)^n`,
//!   a recursion that rebuilds the `m = 1` tables without series division,
//!   convolution identities between tables, and the polynomial behaviour of
//!   the diagonal-offset entries as functions of `n`. Classical Bernoulli
//!   numbers fall out as the `n = 1` case.
//! * [`jacobi`]: generalized binomial coefficients, residues of
//!   `e^{my}/(e^y - 1)^n`, and the commutator coefficient tables those
//!   residues govern.
//!
//! [`verify`] bundles the full identity suite behind a structured report; the
//! `expseries` binary exposes all of the above as subcommands.

// Error payloads carry the offending exact rationals for diagnostics, which
// makes the Err variants big. The fallible paths are cold precondition
// checks, so informative errors win over boxing.
#![allow(clippy::result_large_err)]

pub mod bernoulli;
pub mod changevar;
mod error;
pub mod jacobi;
pub mod laurent_series;
pub mod power_series;
pub mod rational;
pub mod verify;

pub use error::Error;
pub use laurent_series::LaurentSeries;
pub use power_series::PowerSeries;
pub use rational::Rational;
