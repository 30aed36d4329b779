//! Laurent coefficient tables of `e^{mx}/(e^x - 1)^n` and their structure.
//!
//! The central object is the family `q_k` defined by
//!
//! ```text
//! e^{mx} / (e^x - 1)^n  =  sum_{k >= -n} q_k x^k
//! ```
//!
//! for integers `m` and `n` (the pole order `n` may be zero or negative, in
//! which case the "pole" is really a zero and the sum starts at `-n >= 0`).
//! Everything classical about Bernoulli numbers is the `m = 1, n = 1` column:
//! `B_j = j! q_{j-1}`, with the convention `B_1 = +1/2` that comes from
//! expanding `e^x/(e^x - 1)` rather than `1/(e^x - 1)`.
//!
//! Three independent routes to the same numbers live here:
//!
//! * [`q_series`]: direct Laurent expansion through series arithmetic.
//! * [`q_recursive`]: for `m = 1`, a recursion in the offset from the leading
//!   exponent that never divides series, only scalars.
//! * [`expansion_polynomial`]: for fixed offset `j`, the entry `q_{-n+j}` is
//!   a polynomial in `n` of degree at most `j`, recovered by interpolation
//!   and validated on extra sample points.
//!
//! Convolution checks ([`convolution_check`], [`weighted_convolution_check`])
//! tie different columns of the family together; they are quadratic
//! identities with finite index ranges, empty exactly when both sides are
//! forced to zero.

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::laurent_series::LaurentSeries;
use crate::power_series::PowerSeries;
use crate::rational::Rational;

/// Bernoulli numbers `B_0 ..= B_max`, convention `B_1 = +1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    /// Largest index stored.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `B_j`. Panics past the stored range.
    pub fn value(&self, j: usize) -> &Rational {
        assert!(j <= self.max_index(), "Bernoulli index {j} out of range");
        &self.values[j]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// `(e^x - 1)/x` truncated at `order`: the unit-constant series whose
/// reciprocal generates the Bernoulli family.
fn exp_minus_one_over_x(order: usize) -> PowerSeries {
    PowerSeries::from_coeffs(
        (0..=order as u64)
            .map(|k| Rational::factorial(k + 1).recip())
            .collect(),
    )
}

/// `e^{tx}` truncated at `order`.
fn exp_tx(t: &Rational, order: usize) -> PowerSeries {
    let mut lin = PowerSeries::zero(order);
    if order >= 1 {
        lin = PowerSeries::monomial(t.clone(), 1, order);
    }
    lin.exp().expect("linear series has zero constant term")
}

/// Bernoulli numbers `B_0 ..= B_{max_j}` from the Laurent expansion of
/// `e^x/(e^x - 1)`: `B_j = j! * [x^{j-1}] e^x/(e^x - 1)`.
pub fn bernoulli_numbers(max_j: usize) -> BernoulliTable {
    let u = &exp_tx(&Rational::one(), max_j)
        * &exp_minus_one_over_x(max_j)
            .reciprocal()
            .expect("constant term is 1");
    let values = (0..=max_j as u64)
        .map(|j| Rational::factorial(j) * u.coeff(j as usize))
        .collect();
    BernoulliTable { values }
}

/// Value of the `j`-th Bernoulli polynomial at `t`, read off the expansion
/// `e^{tx} x/(e^x - 1) = sum_j B_j(t)/j! x^j`. In particular `B_j(1) = B_j`
/// under this crate's convention and `B_1(0) = -1/2`.
pub fn bernoulli_polynomial_value(j: usize, t: &Rational) -> Rational {
    let u = &exp_tx(t, j)
        * &exp_minus_one_over_x(j)
            .reciprocal()
            .expect("constant term is 1");
    Rational::factorial(j as u64) * u.coeff(j)
}

/// One column of the family: the Laurent window of `e^{mx}/(e^x - 1)^n`.
///
/// The window always starts at exponent `-n`, even when `n <= 0` (then the
/// function is an entire series with a zero of order `-n`, and the leading
/// stored coefficients may vanish). Entries below `-n` are identically zero
/// and are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTable {
    m: i64,
    n: i64,
    series: LaurentSeries,
}

impl QTable {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Leading exponent `-n`.
    pub fn lowest(&self) -> i64 {
        self.series.lowest()
    }

    /// Highest exponent stored.
    pub fn top(&self) -> i64 {
        self.series.top()
    }

    /// `q_k`: zero below the window (provably), an error above it.
    pub fn value(&self, k: i64) -> Result<Rational, Error> {
        self.series.known_coefficient(k)
    }

    /// The underlying Laurent window.
    pub fn series(&self) -> &LaurentSeries {
        &self.series
    }

    /// CSV rows `m,n,k,q`, one per stored exponent, ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,k,q\n");
        for (i, c) in self.series.coeffs().iter().enumerate() {
            let k = self.lowest() + i as i64;
            out.push_str(&format!("{},{},{},{}\n", self.m, self.n, k, c));
        }
        out
    }

    /// Parses the `to_csv` format back. Rows must be contiguous in `k` and
    /// agree on `m` and `n`; anything else is a format error.
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some("m,n,k,q") => {}
            other => return Err(format!("expected header \"m,n,k,q\", found {other:?}")),
        }
        let mut m: Option<i64> = None;
        let mut n: Option<i64> = None;
        let mut next_k: Option<i64> = None;
        let mut lowest = 0i64;
        let mut coeffs = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            let [fm, fn_, fk, fq] = fields[..] else {
                return Err(format!("expected 4 fields, found {line:?}"));
            };
            let rm: i64 = fm.parse().map_err(|_| format!("bad m in {line:?}"))?;
            let rn: i64 = fn_.parse().map_err(|_| format!("bad n in {line:?}"))?;
            let rk: i64 = fk.parse().map_err(|_| format!("bad k in {line:?}"))?;
            let rq: Rational = fq.parse().map_err(|_| format!("bad q in {line:?}"))?;
            match (m, n) {
                (None, None) => {
                    m = Some(rm);
                    n = Some(rn);
                    if rk != -rn {
                        return Err(format!("first row must start at k = -n, found k = {rk}"));
                    }
                    lowest = rk;
                }
                (Some(pm), Some(pn)) if pm == rm && pn == rn => {}
                _ => return Err(format!("inconsistent m or n in {line:?}")),
            }
            if let Some(expected) = next_k {
                if rk != expected {
                    return Err(format!("rows must be contiguous; expected k = {expected}"));
                }
            }
            next_k = Some(rk + 1);
            coeffs.push(rq);
        }
        let (Some(m), Some(n)) = (m, n) else {
            return Err("table has no rows".to_owned());
        };
        Ok(QTable {
            m,
            n,
            series: LaurentSeries::from_window(lowest, coeffs),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct QTableRepr {
    m: i64,
    n: i64,
    lowest: i64,
    coeffs: Vec<Rational>,
}

impl Serialize for QTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QTableRepr {
            m: self.m,
            n: self.n,
            lowest: self.lowest(),
            coeffs: self.series.coeffs().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QTableRepr::deserialize(deserializer)?;
        if repr.lowest != -repr.n {
            return Err(D::Error::custom(format!(
                "table window must start at -n = {}, found {}",
                -repr.n, repr.lowest
            )));
        }
        if repr.coeffs.is_empty() {
            return Err(D::Error::custom("table has no coefficients"));
        }
        Ok(QTable {
            m: repr.m,
            n: repr.n,
            series: LaurentSeries::from_window(repr.lowest, repr.coeffs),
        })
    }
}

impl fmt::Display for QTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e^({}x)/(e^x - 1)^{} = {}",
            self.m, self.n, self.series
        )
    }
}

/// Expands `e^{mx}/(e^x - 1)^n` through exponent `top`.
///
/// Requires `top >= -n` so the window contains at least the leading entry.
/// The expansion multiplies `e^{mx}` by `((e^x - 1)/x)^{-n}` as power series
/// (reciprocal first when `n > 0`) and shifts the window down by `n`.
pub fn q_series(m: i64, n: i64, top: i64) -> Result<QTable, Error> {
    if top < -n {
        return Err(Error::WindowTooSmall { top, lowest: -n });
    }
    let order = (top + n) as usize;
    let emx = exp_tx(&Rational::from_int(m), order);
    let r = exp_minus_one_over_x(order);
    let base = if n >= 0 {
        r.reciprocal()
            .expect("constant term is 1")
            .pow(n as u32)
    } else {
        r.pow((-n) as u32)
    };
    let u = &emx * &base;
    Ok(QTable {
        m,
        n,
        series: LaurentSeries::from_power_series(&u, -n),
    })
}

/// Rebuilds the `m = 1` table for superscript `n` through offset `j_max`
/// using only the recursion; no series reciprocal is involved.
///
/// Writing `Q(n, j) = q_{-n+j}` for the entry of `e^x/(e^x - 1)^n` at
/// offset `j` from the leading exponent, the recursion is `Q(n, 0) = 1` and
///
/// ```text
/// Q(n, j) = -(1/j) [ (B_j/j!) (n - j - 1)
///                    + sum_{i=1}^{j-1} i Q(n+i-j, i) Q(-n-i+j+2, j-i) ]
/// ```
///
/// Both factors in the sum have offsets strictly below `j`, so the recursion
/// terminates; a memo table keeps the state space linear in practice.
pub fn q_recursive(n: i64, j_max: u32) -> QTable {
    let mut rec = Recursion::new(j_max);
    let coeffs: Vec<Rational> = (0..=j_max).map(|j| rec.q_offset(n, j)).collect();
    QTable {
        m: 1,
        n,
        series: LaurentSeries::from_window(-n, coeffs),
    }
}

struct Recursion {
    memo: HashMap<(i64, u32), Rational>,
    /// `B_j / j!` for the linear part of the recursion.
    b_over_factorial: Vec<Rational>,
}

impl Recursion {
    fn new(j_max: u32) -> Self {
        let table = bernoulli_numbers(j_max as usize);
        let b_over_factorial = (0..=j_max as u64)
            .map(|j| table.value(j as usize) * &Rational::factorial(j).recip())
            .collect();
        Recursion {
            memo: HashMap::new(),
            b_over_factorial,
        }
    }

    fn q_offset(&mut self, n: i64, j: u32) -> Rational {
        if j == 0 {
            return Rational::one();
        }
        if let Some(v) = self.memo.get(&(n, j)) {
            return v.clone();
        }
        let jj = j as i64;
        let mut s = &self.b_over_factorial[j as usize] * &Rational::from_int(n - jj - 1);
        for i in 1..j {
            let ii = i as i64;
            let left = self.q_offset(n + ii - jj, i);
            let right = self.q_offset(-n - ii + jj + 2, j - i);
            s += &(&(Rational::from_int(ii) * &left) * &right);
        }
        let v = -(s / Rational::from_int(jj));
        self.memo.insert((n, j), v.clone());
        v
    }
}

/// Cache of `m = 1` tables keyed by superscript, grown on demand.
///
/// The convolution identities touch many superscripts at small windows;
/// sharing the expansions across a grid of checks keeps the cost linear in
/// the number of distinct superscripts instead of the number of checks.
#[derive(Default)]
pub struct QCache {
    tables: HashMap<i64, QTable>,
}

impl QCache {
    pub fn new() -> Self {
        QCache::default()
    }

    /// `q_k` of `e^x/(e^x - 1)^n`, expanding (or widening) the cached table
    /// as needed. Total: below the window the value is zero by construction.
    pub fn value(&mut self, n: i64, k: i64) -> Rational {
        if k < -n {
            return Rational::zero();
        }
        let needs_rebuild = match self.tables.get(&n) {
            Some(t) => t.top() < k,
            None => true,
        };
        if needs_rebuild {
            let top = k.max(-n + 8);
            let table = q_series(1, n, top).expect("top >= -n by construction");
            self.tables.insert(n, table);
        }
        self.tables[&n]
            .value(k)
            .expect("window was widened to cover k")
    }
}

/// One instance of the quadratic convolution identity
///
/// ```text
/// sum_{k=m}^{-n+j} q^{(k+1)}_{-m-1} q^{(j-k+1)}_{-n-1} = q^{(j+1)}_{-m-n-1}
/// ```
///
/// where superscripts denote the pole order of the `m = 1` family. The range
/// is empty exactly when `m + n > j`; then the right side sits below its own
/// window and both sides are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvolutionReport {
    pub m: i64,
    pub n: i64,
    pub j: i64,
    /// Number of terms in the (possibly empty) sum.
    pub terms: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl ConvolutionReport {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Checks the convolution identity for one `(m, n, j)`, sharing expansions
/// through `cache`.
pub fn convolution_check_cached(
    m: i64,
    n: i64,
    j: i64,
    cache: &mut QCache,
) -> ConvolutionReport {
    let mut lhs = Rational::zero();
    let mut terms = 0usize;
    for k in m..=(-n + j) {
        let left = cache.value(k + 1, -m - 1);
        let right = cache.value(j - k + 1, -n - 1);
        lhs += &(&left * &right);
        terms += 1;
    }
    let rhs = cache.value(j + 1, -m - n - 1);
    ConvolutionReport {
        m,
        n,
        j,
        terms,
        lhs,
        rhs,
    }
}

/// [`convolution_check_cached`] with a throwaway cache.
pub fn convolution_check(m: i64, n: i64, j: i64) -> ConvolutionReport {
    convolution_check_cached(m, n, j, &mut QCache::new())
}

/// One instance of the weighted convolution identity
///
/// ```text
/// sum_{k=m}^{-n} k q^{(k+1)}_{-m-1} q^{(-k+1)}_{-n-1} = m delta_{m+n,0}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedConvolutionReport {
    pub m: i64,
    pub n: i64,
    pub terms: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl WeightedConvolutionReport {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Checks the weighted convolution identity for one `(m, n)`.
pub fn weighted_convolution_check_cached(
    m: i64,
    n: i64,
    cache: &mut QCache,
) -> WeightedConvolutionReport {
    let mut lhs = Rational::zero();
    let mut terms = 0usize;
    for k in m..=(-n) {
        let left = cache.value(k + 1, -m - 1);
        let right = cache.value(-k + 1, -n - 1);
        lhs += &(&(Rational::from_int(k) * &left) * &right);
        terms += 1;
    }
    let rhs = if m + n == 0 {
        Rational::from_int(m)
    } else {
        Rational::zero()
    };
    WeightedConvolutionReport {
        m,
        n,
        terms,
        lhs,
        rhs,
    }
}

/// [`weighted_convolution_check_cached`] with a throwaway cache.
pub fn weighted_convolution_check(m: i64, n: i64) -> WeightedConvolutionReport {
    weighted_convolution_check_cached(m, n, &mut QCache::new())
}

/// Polynomial in `n` describing a fixed offset of the `m = 1` family:
/// `value(n) = q_{-n+j}` of `e^x/(e^x - 1)^n` for every integer `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NPolynomial {
    /// Offset from the leading exponent.
    pub j: u32,
    /// Ascending coefficients in `n`; degree is at most `j`.
    pub coefficients: Vec<Rational>,
}

impl NPolynomial {
    pub fn degree(&self) -> usize {
        let nonzero = self
            .coefficients
            .iter()
            .rposition(|c| !c.is_zero());
        nonzero.unwrap_or(0)
    }

    pub fn evaluate(&self, n: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn evaluate_int(&self, n: i64) -> Rational {
        self.evaluate(&Rational::from_int(n))
    }
}

/// Recovers the offset-`j` polynomial by Lagrange interpolation on the
/// `j + 1` sample points `n = j+2 ..= 2j+2` (safely away from the small
/// roots), then validates it against the direct expansion on the `j + 4`
/// extra points `n in [-3..0]` and `n in [2j+3 ..= 3j+2]`.
///
/// A validation mismatch is returned as an error: it would mean the
/// polynomiality property itself fails.
pub fn expansion_polynomial(j: u32) -> Result<NPolynomial, Error> {
    let sample_at = |n: i64| -> Rational {
        let offset = j as i64 - n; // exponent of the entry, -n + j
        q_series(1, n, offset)
            .expect("offset >= -n since j >= 0")
            .value(offset)
            .expect("offset is inside the window")
    };
    let points: Vec<(i64, Rational)> = (j as i64 + 2..=2 * j as i64 + 2)
        .map(|n| (n, sample_at(n)))
        .collect();
    let coefficients = interpolate(&points);
    debug_assert!(coefficients.len() <= j as usize + 1);
    let poly = NPolynomial { j, coefficients };
    let validation: Vec<i64> = (-3..=0)
        .chain(2 * j as i64 + 3..=3 * j as i64 + 2)
        .collect();
    for n in validation {
        let expected = sample_at(n);
        let got = poly.evaluate_int(n);
        if got != expected {
            return Err(Error::InterpolationMismatch {
                j,
                n,
                expected,
                got,
            });
        }
    }
    Ok(poly)
}

/// Lagrange interpolation through distinct integer nodes; ascending
/// coefficients, trailing zeros trimmed.
fn interpolate(points: &[(i64, Rational)]) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); points.len()];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Basis polynomial prod_{l != i} (X - x_l), built incrementally.
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (l, (xl, _)) in points.iter().enumerate() {
            if l == i {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d] += &(c * &Rational::from_int(-xl));
                next[d + 1] += c;
            }
            basis = next;
            denom *= &Rational::from_int(xi - xl);
        }
        let weight = yi / &denom;
        for (d, c) in basis.into_iter().enumerate() {
            coeffs[d] += &(c * &weight);
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Where the offset-`j` polynomial is forced to vanish: `n = j + 1` for
/// every `j >= 1`, `n = 1` for odd `j > 1`, and `n = 2` for odd `j`. The
/// report stores the evaluated values so a failure names the culprit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    pub j: u32,
    /// `(root, value at root)` for each root the theory forces.
    pub roots: Vec<(i64, Rational)>,
}

impl DivisibilityReport {
    pub fn pass(&self) -> bool {
        self.roots.iter().all(|(_, v)| v.is_zero())
    }
}

/// Evaluates the interpolated offset-`j` polynomial at its forced roots.
pub fn divisibility_check(j: u32) -> Result<DivisibilityReport, Error> {
    let poly = expansion_polynomial(j)?;
    let mut roots = Vec::new();
    if j >= 1 {
        roots.push(j as i64 + 1);
    }
    if j % 2 == 1 && j > 1 {
        roots.push(1);
    }
    if j % 2 == 1 {
        roots.push(2);
    }
    Ok(DivisibilityReport {
        j,
        roots: roots
            .into_iter()
            .map(|n| (n, poly.evaluate_int(n)))
            .collect(),
    })
}
