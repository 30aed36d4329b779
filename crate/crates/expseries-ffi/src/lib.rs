//! C ABI over the exact series kernel.
//!
//! Every function follows one contract:
//!
//! - Handles (`Series`, `Decomposition`, `QTable`) are opaque, created by
//!   the `*_new`-style constructors, owned by the caller, and released by
//!   the matching `*_free`. Freeing a null handle is a no-op.
//! - Exact rationals cross the boundary as NUL-terminated UTF-8 strings in
//!   the form `p/q` or `p`. Strings returned through `char **` out-params
//!   are owned by the caller and must be released with
//!   [`expseries_string_free`].
//! - Every fallible function returns a [`Status`] and writes its result
//!   through its final out-pointer, which is set to null (or left
//!   untouched, for scalar out-params) unless the status is `Ok`.
//! - Pointers must be valid for the duration of the call; handles are not
//!   synchronized, so a given handle may be used by one thread at a time.
//!
//! Orders and table windows are capped at [`MAX_EXTENT`] (2^20) entries so
//! that a caller computing sizes from untrusted input gets a clean
//! `InvalidArgument` instead of an allocation failure.

// The pointer contract above applies uniformly; per-function safety
// sections would repeat it verbatim.
#![allow(clippy::missing_safety_doc)]

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use expseries::bernoulli::{
    bernoulli_numbers, bernoulli_polynomial_value, q_recursive, q_series,
};
use expseries::changevar::{apply_decomposition, decompose, exponential_change};
use expseries::jacobi::{
    commutator_coefficient, residue_formula, residue_oracle, CoefficientQuery,
};
use expseries::{Error, PowerSeries, Rational};

/// Largest accepted series order, table window, or coefficient count
/// (2^20). Doc comments below refer to this bound as `MAX_EXTENT`.
pub const MAX_EXTENT: usize = 1 << 20;

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The call succeeded and the out-parameter holds the result.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An index, size, or range was outside what the target supports.
    InvalidArgument = 2,
    /// A string argument was not valid UTF-8 or not a rational in `p/q`
    /// form.
    ParseError = 3,
    /// The input violated a mathematical precondition, such as decomposing
    /// a series that is not `x + O(x^2)`.
    Precondition = 4,
}

/// Opaque truncated power series with exact rational coefficients.
pub struct Series(PowerSeries);

/// Opaque list of factor coefficients `b_1, b_2, ...` of a decomposition
/// into exponentials of single derivations.
pub struct Decomposition(expseries::changevar::Decomposition);

/// Opaque table of Laurent coefficients of `e^{mx}/(e^x - 1)^n`.
pub struct QTable(expseries::bernoulli::QTable);

fn status_of(err: &Error) -> Status {
    match err {
        Error::BelowWindow { .. } | Error::BeyondTruncation { .. } => Status::InvalidArgument,
        _ => Status::Precondition,
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Status> {
    if p.is_null() {
        return Err(Status::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Status::ParseError)
}

unsafe fn read_rational(p: *const c_char) -> Result<Rational, Status> {
    read_str(p)?.trim().parse().map_err(|_| Status::ParseError)
}

unsafe fn give_string(text: String, out: *mut *mut c_char) -> Status {
    let c = CString::new(text).expect("rational text has no interior NUL");
    *out = c.into_raw();
    Status::Ok
}

unsafe fn give_series(series: PowerSeries, out: *mut *mut Series) -> Status {
    *out = Box::into_raw(Box::new(Series(series)));
    Status::Ok
}

/// Builds a series from its coefficients in degree order, constant first.
/// `coeffs` must point at `len` rational strings, `1 <= len <= MAX_EXTENT`;
/// the resulting order is `len - 1`.
#[no_mangle]
pub unsafe extern "C" fn expseries_series_new(
    coeffs: *const *const c_char,
    len: usize,
    out: *mut *mut Series,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if coeffs.is_null() {
        return Status::NullArgument;
    }
    if len == 0 || len > MAX_EXTENT {
        return Status::InvalidArgument;
    }
    let mut parsed = Vec::with_capacity(len);
    for &p in std::slice::from_raw_parts(coeffs, len) {
        match read_rational(p) {
            Ok(r) => parsed.push(r),
            Err(status) => return status,
        }
    }
    give_series(PowerSeries::from_coeffs(parsed), out)
}

/// `(e^{ax} - 1)/a` truncated at `order` (the identity `x` when `a` is 0).
#[no_mangle]
pub unsafe extern "C" fn expseries_series_exponential(
    a: *const c_char,
    order: usize,
    out: *mut *mut Series,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if order > MAX_EXTENT {
        return Status::InvalidArgument;
    }
    let a = match read_rational(a) {
        Ok(r) => r,
        Err(status) => return status,
    };
    give_series(exponential_change(&a, order), out)
}

/// The identity series `x` truncated at `order >= 1`.
#[no_mangle]
pub unsafe extern "C" fn expseries_series_identity(
    order: usize,
    out: *mut *mut Series,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if order == 0 || order > MAX_EXTENT {
        return Status::InvalidArgument;
    }
    give_series(PowerSeries::identity(order), out)
}

/// Truncation order of the series.
#[no_mangle]
pub unsafe extern "C" fn expseries_series_order(
    series: *const Series,
    out: *mut usize,
) -> Status {
    let (Some(series), false) = (series.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = series.0.order();
    Status::Ok
}

/// Coefficient of `x^k` as a rational string; `k` beyond the order is an
/// `InvalidArgument`.
#[no_mangle]
pub unsafe extern "C" fn expseries_series_coeff(
    series: *const Series,
    k: usize,
    out: *mut *mut c_char,
) -> Status {
    let (Some(series), false) = (series.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = ptr::null_mut();
    if k > series.0.order() {
        return Status::InvalidArgument;
    }
    give_string(series.0.coeff(k).to_string(), out)
}

/// Compositional inverse through the stored order; the input must have the
/// shape `x + O(x^2)`.
#[no_mangle]
pub unsafe extern "C" fn expseries_series_reversion(
    series: *const Series,
    out: *mut *mut Series,
) -> Status {
    let (Some(series), false) = (series.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = ptr::null_mut();
    match series.0.reversion() {
        Ok(r) => give_series(r, out),
        Err(e) => status_of(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn expseries_series_free(series: *mut Series) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Factors a normalized series into `exp(b_j x^{j+1} d/dx)` coefficients.
#[no_mangle]
pub unsafe extern "C" fn expseries_decompose(
    series: *const Series,
    out: *mut *mut Decomposition,
) -> Status {
    let (Some(series), false) = (series.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = ptr::null_mut();
    match decompose(&series.0) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(Decomposition(d)));
            Status::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Number of stored factor coefficients `b_1 .. b_len`.
#[no_mangle]
pub unsafe extern "C" fn expseries_decomposition_len(
    decomposition: *const Decomposition,
    out: *mut usize,
) -> Status {
    let (Some(d), false) = (decomposition.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = d.0.len();
    Status::Ok
}

/// Factor coefficient `b_j` as a rational string, 1-indexed.
#[no_mangle]
pub unsafe extern "C" fn expseries_decomposition_coefficient(
    decomposition: *const Decomposition,
    j: usize,
    out: *mut *mut c_char,
) -> Status {
    let (Some(d), false) = (decomposition.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = ptr::null_mut();
    if j == 0 || j > d.0.len() {
        return Status::InvalidArgument;
    }
    give_string(d.0.coefficient(j).to_string(), out)
}

/// Applies the factors to `g` in ascending order, or descending when
/// `reversed`; `negated` flips every coefficient's sign. Reversed and
/// negated together build the compositional inverse factor by factor.
#[no_mangle]
pub unsafe extern "C" fn expseries_decomposition_apply(
    decomposition: *const Decomposition,
    g: *const Series,
    reversed: bool,
    negated: bool,
    out: *mut *mut Series,
) -> Status {
    let (Some(d), Some(g), false) = (decomposition.as_ref(), g.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = ptr::null_mut();
    give_series(apply_decomposition(&d.0, &g.0, reversed, negated), out)
}

#[no_mangle]
pub unsafe extern "C" fn expseries_decomposition_free(decomposition: *mut Decomposition) {
    if !decomposition.is_null() {
        drop(Box::from_raw(decomposition));
    }
}

/// Expands `e^{mx}/(e^x - 1)^n` through exponent `top`; requires
/// `top >= -n` and a window of at most `MAX_EXTENT` entries.
#[no_mangle]
pub unsafe extern "C" fn expseries_qtable_expand(
    m: i64,
    n: i64,
    top: i64,
    out: *mut *mut QTable,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if top.checked_add(n).is_none_or(|width| width < 0 || width as u128 >= MAX_EXTENT as u128) {
        return Status::InvalidArgument;
    }
    match q_series(m, n, top) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(QTable(t)));
            Status::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// The `m = 1` table computed by the index recursion instead of expansion,
/// covering offsets `0 ..= jmax` past the leading exponent `-n`.
#[no_mangle]
pub unsafe extern "C" fn expseries_qtable_recursive(
    n: i64,
    jmax: u32,
    out: *mut *mut QTable,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if jmax as usize >= MAX_EXTENT || n.checked_neg().is_none() {
        return Status::InvalidArgument;
    }
    *out = Box::into_raw(Box::new(QTable(q_recursive(n, jmax))));
    Status::Ok
}

/// Lowest exponent of the stored window (always `-n`).
#[no_mangle]
pub unsafe extern "C" fn expseries_qtable_lowest(
    table: *const QTable,
    out: *mut i64,
) -> Status {
    let (Some(t), false) = (table.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = t.0.lowest();
    Status::Ok
}

/// Highest exponent of the stored window.
#[no_mangle]
pub unsafe extern "C" fn expseries_qtable_top(table: *const QTable, out: *mut i64) -> Status {
    let (Some(t), false) = (table.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = t.0.top();
    Status::Ok
}

/// Coefficient of `x^k` as a rational string. Below the window the value
/// is zero by construction; above the stored top it is unknown, and the
/// call returns `InvalidArgument`.
#[no_mangle]
pub unsafe extern "C" fn expseries_qtable_value(
    table: *const QTable,
    k: i64,
    out: *mut *mut c_char,
) -> Status {
    let (Some(t), false) = (table.as_ref(), out.is_null()) else {
        return Status::NullArgument;
    };
    *out = ptr::null_mut();
    match t.0.value(k) {
        Ok(v) => give_string(v.to_string(), out),
        Err(e) => status_of(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn expseries_qtable_free(table: *mut QTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Bernoulli number `B_j` in the convention with `B_1 = 1/2`.
#[no_mangle]
pub unsafe extern "C" fn expseries_bernoulli_number(j: usize, out: *mut *mut c_char) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if j >= MAX_EXTENT {
        return Status::InvalidArgument;
    }
    give_string(bernoulli_numbers(j).value(j).to_string(), out)
}

/// Bernoulli polynomial value `B_j(t)` for a rational `t`.
#[no_mangle]
pub unsafe extern "C" fn expseries_bernoulli_polynomial(
    j: usize,
    t: *const c_char,
    out: *mut *mut c_char,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if j >= MAX_EXTENT {
        return Status::InvalidArgument;
    }
    let t = match read_rational(t) {
        Ok(r) => r,
        Err(status) => return status,
    };
    give_string(bernoulli_polynomial_value(j, &t).to_string(), out)
}

/// Residue of `e^{my}/(e^y - 1)^n` by the closed binomial form; `n >= 1`
/// and at most `MAX_EXTENT`.
#[no_mangle]
pub unsafe extern "C" fn expseries_residue_formula(
    m: i64,
    n: i64,
    out: *mut *mut c_char,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if n as i128 > MAX_EXTENT as i128 {
        return Status::InvalidArgument;
    }
    match residue_formula(m, n) {
        Ok(v) => give_string(v.to_string(), out),
        Err(e) => status_of(&e),
    }
}

/// The same residue extracted from the series expansion; `n >= 1` and the
/// expansion must fit in `MAX_EXTENT` entries.
#[no_mangle]
pub unsafe extern "C" fn expseries_residue_oracle(
    m: i64,
    n: i64,
    out: *mut *mut c_char,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if n as i128 >= MAX_EXTENT as i128 {
        return Status::InvalidArgument;
    }
    match residue_oracle(m, n) {
        Ok(v) => give_string(v.to_string(), out),
        Err(e) => status_of(&e),
    }
}

/// Commutator coefficient `C(w - j - 1, k - n)` of weighted derivations,
/// zero whenever `k < n`. For `k >= n` the offset `k - n` is capped at
/// `MAX_EXTENT`, and `w - j - 1` must not overflow.
#[no_mangle]
pub unsafe extern "C" fn expseries_commutator_coefficient(
    w: i64,
    j: i64,
    k: i64,
    n: i64,
    out: *mut *mut c_char,
) -> Status {
    if out.is_null() {
        return Status::NullArgument;
    }
    *out = ptr::null_mut();
    if k >= n {
        let offset = k.checked_sub(n);
        let top = w.checked_sub(j).and_then(|t| t.checked_sub(1));
        if offset.is_none_or(|b| b as u128 > MAX_EXTENT as u128) || top.is_none() {
            return Status::InvalidArgument;
        }
    }
    give_string(
        commutator_coefficient(&CoefficientQuery { w, j, k, n }).to_string(),
        out,
    )
}

/// Releases a string returned through any `char **` out-parameter.
#[no_mangle]
pub unsafe extern "C" fn expseries_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
