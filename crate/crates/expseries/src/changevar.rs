//! Product-of-exponentials decomposition of a formal change of variable.
//!
//! A normalized change of variable `f = x + a_2 x^2 + a_3 x^3 + ...` can be
//! produced from `x` by an ordered product of operator exponentials
//!
//! ```text
//! f = ... exp(b_3 x^4 d/dx) exp(b_2 x^3 d/dx) exp(b_1 x^2 d/dx) x
//! ```
//!
//! applied rightmost factor first, and by a single exponential
//! `exp(sum_j A_j x^{j+1} d/dx) x` of one combined derivation. This module
//! computes both coefficient families, applies (partial) products to
//! arbitrary series, and cross-checks the two forms against each other.
//!
//! Invariants that make everything terminate and stay exact:
//!
//! * Each derivation `b x^{j+1} d/dx` with `j >= 1` raises the lowest degree
//!   of its argument by at least `j`, so operator exponentials collapse to
//!   finite sums at any truncation order.
//! * `b_n` only influences coefficients of degree `n + 1` and higher, and
//!   enters degree `n + 1` linearly; the decomposition is therefore found by
//!   one forward sweep with no equation solving.
//! * Applying a factor at truncation order `N` commutes with truncating the
//!   exact result to order `N`: nothing is lost by working truncated.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::power_series::PowerSeries;
use crate::rational::Rational;

/// One derivation `coefficient * x^{index + 1} d/dx` with `index >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTerm {
    index: u32,
    coefficient: Rational,
}

impl DerivationTerm {
    /// Panics if `index` is zero: the degree-preserving derivation
    /// `x d/dx` never occurs in a decomposition and would break the
    /// termination argument for operator exponentials.
    pub fn new(index: u32, coefficient: Rational) -> Self {
        assert!(index >= 1, "derivation index must be at least 1");
        DerivationTerm { index, coefficient }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }
}

/// The coefficients `b_1 .. b_N` of an ordered product of exponentials.
///
/// `terms()[j - 1]` is `b_j`. A decomposition extracted from a series of
/// truncation order `M` carries `N = M - 1` coefficients and reproduces the
/// series exactly through order `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    terms: Vec<Rational>,
}

impl Decomposition {
    pub fn from_terms(terms: Vec<Rational>) -> Self {
        Decomposition { terms }
    }

    /// Number of factors `N`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `b_j`, 1-indexed to match the factor it belongs to.
    pub fn coefficient(&self, j: usize) -> &Rational {
        assert!(j >= 1 && j <= self.terms.len(), "factor index {j} out of range");
        &self.terms[j - 1]
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    /// Truncation order of the series the product reproduces exactly.
    pub fn order(&self) -> usize {
        self.terms.len() + 1
    }
}

/// The coefficients `A_1 .. A_N` of the single-exponential form
/// `exp(sum_j A_j x^{j+1} d/dx) x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumForm {
    terms: Vec<Rational>,
}

impl SumForm {
    pub fn from_terms(terms: Vec<Rational>) -> Self {
        SumForm { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `A_j`, 1-indexed.
    pub fn coefficient(&self, j: usize) -> &Rational {
        assert!(j >= 1 && j <= self.terms.len(), "term index {j} out of range");
        &self.terms[j - 1]
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    /// Truncation order of the series the exponential reproduces exactly.
    pub fn order(&self) -> usize {
        self.terms.len() + 1
    }
}

/// `(e^{ax} - 1)/a` truncated at `order`: the exponential change of variable
/// with rate `a`. Coefficient of `x^k` is `a^{k-1}/k!`, so `a = 0` yields
/// exactly `x` (the limit case, via `0^0 = 1`).
pub fn exponential_change(a: &Rational, order: usize) -> PowerSeries {
    let coeffs = (0..=order as u64)
        .map(|k| {
            if k == 0 {
                Rational::zero()
            } else {
                a.pow(k as u32 - 1) * Rational::factorial(k).recip()
            }
        })
        .collect();
    PowerSeries::from_coeffs(coeffs)
}

/// The derivation itself: `b x^{j+1} g'(x)`, truncated at the order of `g`.
///
/// The coefficient of `x^k` in `x^{j+1} g'` is `(k - j) * g_{k-j}`, so the
/// result is fully determined by the stored window of `g`.
pub fn apply_derivation(term: &DerivationTerm, g: &PowerSeries) -> PowerSeries {
    let order = g.order();
    let j = term.index as usize;
    let mut out = vec![Rational::zero(); order + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(j + 1) {
        let src = &g.coeffs()[k - j];
        if !src.is_zero() {
            *slot = &(Rational::from_int((k - j) as i64) * src) * &term.coefficient;
        }
    }
    PowerSeries::from_coeffs(out)
}

/// One factor of the product: `exp(b x^{j+1} d/dx)` applied to `g`.
///
/// Terminates unconditionally: each application of the derivation raises the
/// lowest degree by at least `j >= 1`, so at truncation order `N` the series
/// `sum_i D^i g / i!` has at most `N/j + 1` nonzero terms.
pub fn exp_derivation(term: &DerivationTerm, g: &PowerSeries) -> PowerSeries {
    let mut acc = g.clone();
    let mut cur = g.clone();
    let mut i = 1i64;
    loop {
        cur = apply_derivation(term, &cur).scale(&Rational::from_int(i).recip());
        if cur.is_zero() {
            return acc;
        }
        acc = &acc + &cur;
        i += 1;
    }
}

/// `exp(sum_j coeffs[j-1] x^{j+1} d/dx)` applied to `g`.
///
/// The combined derivation is `g -> p(x) g'(x)` with
/// `p = sum_j A_j x^{j+1}`; since `p` has no terms below `x^2`, each
/// application still raises the lowest degree, and termination follows as
/// for a single factor.
fn exp_derivation_sum(coeffs: &[Rational], g: &PowerSeries) -> PowerSeries {
    let order = g.order();
    // p(x)/x = sum_j A_j x^j: a polynomial, hence known exactly at every
    // order, so it is padded to the working order rather than truncated.
    let mut p_over_x = vec![Rational::zero(); order + 1];
    for (i, a) in coeffs.iter().enumerate() {
        let j = i + 1;
        if j <= order {
            p_over_x[j] = a.clone();
        }
    }
    let p_over_x = PowerSeries::from_coeffs(p_over_x);
    let mut acc = g.clone();
    let mut cur = g.clone();
    let mut i = 1i64;
    loop {
        cur = derive_with_over_x(&p_over_x, &cur).scale(&Rational::from_int(i).recip());
        if cur.is_zero() {
            return acc;
        }
        acc = &acc + &cur;
        i += 1;
        // p has valuation >= 2, so the lowest degree of cur grows by at
        // least 1 per round; order+1 rounds always suffice.
        debug_assert!(i <= order as i64 + 2, "derivation sum failed to terminate");
    }
}

/// `p(x) * g'(x)` computed as `(p/x) * (x * g')`, truncated at the order of
/// `g`. Both factors stay inside the stored window of `g`: coefficient `k`
/// of `x * g'` is `k * g_k`.
fn derive_with_over_x(p_over_x: &PowerSeries, g: &PowerSeries) -> PowerSeries {
    let order = g.order();
    let mut x_gprime = vec![Rational::zero(); order + 1];
    for (k, slot) in x_gprime.iter_mut().enumerate().skip(1) {
        if !g.coeffs()[k].is_zero() {
            *slot = Rational::from_int(k as i64) * &g.coeffs()[k];
        }
    }
    p_over_x * &PowerSeries::from_coeffs(x_gprime)
}

/// Extracts the product coefficients `b_1 .. b_{M-1}` of a normalized
/// series of order `M`.
///
/// Forward sweep: after the factors for `1 .. n-1` are applied to `x`, the
/// partial product agrees with `f` through degree `n`, and `b_n` is exactly
/// the gap at degree `n + 1` because the new factor adds `b_n x^{n+1}` there
/// and touches nothing lower.
pub fn decompose(f: &PowerSeries) -> Result<Decomposition, Error> {
    check_normalized("decompose", f)?;
    let order = f.order();
    let mut terms = Vec::with_capacity(order.saturating_sub(1));
    let mut current = PowerSeries::identity(order);
    for n in 1..order {
        let b = f.coeff(n + 1) - current.coeff(n + 1);
        if !b.is_zero() {
            let term = DerivationTerm::new(n as u32, b.clone());
            current = exp_derivation(&term, &current);
        }
        terms.push(b);
    }
    Ok(Decomposition { terms })
}

/// Applies the ordered product described by `d` to an arbitrary series.
///
/// * `reversed = false`: factors are applied in the order `j = 1, 2, ..., N`
///   (the order that rebuilds `f` from `x`).
/// * `reversed = true`: factors are applied in the order `j = N, ..., 2, 1`.
/// * `negated = true`: each `b_j` is replaced by `-b_j`.
///
/// With both flags set the product inverts the original one factor by
/// factor, so it carries `x` to the compositional inverse of `f` without
/// ever materializing an infinite product.
pub fn apply_decomposition(
    d: &Decomposition,
    g: &PowerSeries,
    reversed: bool,
    negated: bool,
) -> PowerSeries {
    let mut out = g.clone();
    let indices: Vec<usize> = if reversed {
        (1..=d.len()).rev().collect()
    } else {
        (1..=d.len()).collect()
    };
    for j in indices {
        let b = d.coefficient(j);
        if b.is_zero() {
            continue;
        }
        let b = if negated { -b } else { b.clone() };
        out = exp_derivation(&DerivationTerm::new(j as u32, b), &out);
    }
    out
}

/// Extracts the sum-form coefficients `A_1 .. A_{M-1}` of a normalized
/// series of order `M`, so that `exp(sum_j A_j x^{j+1} d/dx) x = f` through
/// order `M`.
///
/// `A_n` first shows up at degree `n + 1`, linearly; everything else at that
/// degree only involves `A_1 .. A_{n-1}`, so a forward sweep determines the
/// coefficients one at a time.
pub fn sum_form(f: &PowerSeries) -> Result<SumForm, Error> {
    check_normalized("sum_form", f)?;
    let order = f.order();
    let mut terms: Vec<Rational> = Vec::with_capacity(order.saturating_sub(1));
    for n in 1..order {
        let partial = exp_derivation_sum(&terms, &PowerSeries::identity(n + 1));
        let a = f.coeff(n + 1) - partial.coeff(n + 1);
        terms.push(a);
    }
    Ok(SumForm { terms })
}

/// Applies `exp(sum_j A_j x^{j+1} d/dx)` to an arbitrary series.
pub fn apply_sum_form(s: &SumForm, g: &PowerSeries) -> PowerSeries {
    exp_derivation_sum(&s.terms, g)
}

/// Outcome of cross-checking the product form against the sum form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CbhReport {
    /// Truncation order through which the forms were compared.
    pub order: usize,
    /// Product of exponentials applied to `x` reproduces the input.
    pub product_matches: bool,
    /// Single combined exponential applied to `x` reproduces the input.
    pub sum_matches: bool,
    /// Smallest degree at which any comparison failed.
    pub first_mismatch: Option<usize>,
}

impl CbhReport {
    pub fn pass(&self) -> bool {
        self.product_matches && self.sum_matches
    }
}

/// Computes both forms of `f` and verifies that each reproduces `f` when
/// applied to `x`. Exact equality, coefficient by coefficient; the report
/// carries the first degree where anything disagrees.
pub fn cbh_check(f: &PowerSeries) -> Result<CbhReport, Error> {
    let d = decompose(f)?;
    let s = sum_form(f)?;
    let order = f.order();
    let product = apply_decomposition(&d, &PowerSeries::identity(order), false, false);
    let sum = apply_sum_form(&s, &PowerSeries::identity(order));
    let mut first_mismatch = None;
    for k in 0..=order {
        if product.coeff(k) != f.coeff(k) || sum.coeff(k) != f.coeff(k) {
            first_mismatch = Some(k);
            break;
        }
    }
    Ok(CbhReport {
        order,
        product_matches: &product == f,
        sum_matches: &sum == f,
        first_mismatch,
    })
}

/// Sign of an even-indexed product coefficient, for the vanishing report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(r: &Rational) -> Sign {
        if r.is_negative() {
            Sign::Negative
        } else if r.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }
}

/// What the decomposition of `(e^{ax} - 1)/a` looks like: checked facts
/// about `b_1` and the odd coefficients, observed data about the even ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddVanishingReport {
    pub a: Rational,
    /// Truncation order of the decomposed series.
    pub order: usize,
    pub b1: Rational,
    /// `b_1 == a/2`.
    pub b1_matches: bool,
    /// Odd indices `j > 1` with nonzero `b_j`; expected empty.
    pub odd_nonzero: Vec<usize>,
    /// `(2n, sign of b_{2n})` for `2n >= 4`, in index order. Observational:
    /// the strict sign alternation here is conjectural, so it is reported,
    /// never asserted.
    pub even_signs: Vec<(usize, Sign)>,
    /// Whether the observed signs of `b_4, b_6, ...` alternate strictly
    /// starting from a negative `b_4`.
    pub signs_alternate: bool,
}

impl OddVanishingReport {
    /// The proved claims hold: `b_1 = a/2` and odd coefficients vanish.
    pub fn pass(&self) -> bool {
        self.b1_matches && self.odd_nonzero.is_empty()
    }
}

/// Decomposes `(e^{ax} - 1)/a` at the given order and reports which of the
/// structural facts hold: `b_1 = a/2`, vanishing of odd-indexed `b_j` for
/// `j > 1`, and the (observed, not asserted) sign pattern of the even ones.
pub fn odd_vanishing_report(a: &Rational, order: usize) -> Result<OddVanishingReport, Error> {
    let f = exponential_change(a, order);
    let d = decompose(&f)?;
    let b1 = if d.is_empty() {
        Rational::zero()
    } else {
        d.coefficient(1).clone()
    };
    let half_a = a * &Rational::new(1, 2);
    let odd_nonzero: Vec<usize> = (3..=d.len())
        .step_by(2)
        .filter(|&j| !d.coefficient(j).is_zero())
        .collect();
    let even_signs: Vec<(usize, Sign)> = (4..=d.len())
        .step_by(2)
        .map(|j| (j, Sign::of(d.coefficient(j))))
        .collect();
    let signs_alternate = !even_signs.is_empty()
        && even_signs.iter().enumerate().all(|(i, (_, s))| {
            *s == if i % 2 == 0 {
                Sign::Negative
            } else {
                Sign::Positive
            }
        });
    Ok(OddVanishingReport {
        a: a.clone(),
        order,
        b1_matches: b1 == half_a,
        b1,
        odd_nonzero,
        even_signs,
        signs_alternate,
    })
}

fn check_normalized(op: &'static str, f: &PowerSeries) -> Result<(), Error> {
    if f.order() < 1 || !f.coeff(0).is_zero() || !f.coeff(1).is_one() {
        let constant = f.coeff(0).clone();
        let linear = if f.order() >= 1 {
            f.coeff(1).clone()
        } else {
            Rational::zero()
        };
        return Err(Error::NotNormalized {
            op,
            constant,
            linear,
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TermsRepr {
    order: usize,
    terms: Vec<Rational>,
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TermsRepr {
            order: self.order(),
            terms: self.terms.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TermsRepr::deserialize(deserializer)?;
        if repr.order != repr.terms.len() + 1 {
            return Err(D::Error::custom(format!(
                "decomposition with {} terms must declare order {}, found {}",
                repr.terms.len(),
                repr.terms.len() + 1,
                repr.order
            )));
        }
        Ok(Decomposition { terms: repr.terms })
    }
}

impl Serialize for SumForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TermsRepr {
            order: self.order(),
            terms: self.terms.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SumForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TermsRepr::deserialize(deserializer)?;
        if repr.order != repr.terms.len() + 1 {
            return Err(D::Error::custom(format!(
                "sum form with {} terms must declare order {}, found {}",
                repr.terms.len(),
                repr.terms.len() + 1,
                repr.order
            )));
        }
        Ok(SumForm { terms: repr.terms })
    }
}
