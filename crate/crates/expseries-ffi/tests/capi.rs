//! Exercises the C surface the way a foreign caller would: raw pointers,
//! status codes, and explicit frees, including every error path a binding
//! author needs to distinguish.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use expseries_ffi::*;

/// Takes ownership of a returned string and frees it through the C API.
unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let text = CStr::from_ptr(p).to_str().unwrap().to_string();
    expseries_string_free(p);
    text
}

unsafe fn series_from(coeffs: &[&str]) -> *mut Series {
    let owned: Vec<CString> = coeffs.iter().map(|c| CString::new(*c).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let status = expseries_series_new(ptrs.as_ptr(), ptrs.len(), &mut out);
    assert_eq!(status, Status::Ok);
    out
}

#[test]
fn series_construction_and_coefficient_access() {
    unsafe {
        let s = series_from(&["0", "1", "-1/2", "1/3"]);
        let mut order = 0usize;
        assert_eq!(expseries_series_order(s, &mut order), Status::Ok);
        assert_eq!(order, 3);
        let mut text = ptr::null_mut();
        assert_eq!(expseries_series_coeff(s, 2, &mut text), Status::Ok);
        assert_eq!(take_string(text), "-1/2");
        let mut beyond = ptr::null_mut();
        assert_eq!(
            expseries_series_coeff(s, 4, &mut beyond),
            Status::InvalidArgument
        );
        assert!(beyond.is_null());
        expseries_series_free(s);
    }
}

#[test]
fn reversion_undoes_the_series() {
    unsafe {
        // x + x^2 has the reversion x - x^2 + 2x^3 - 5x^4.
        let s = series_from(&["0", "1", "1", "0", "0"]);
        let mut r = ptr::null_mut();
        assert_eq!(expseries_series_reversion(s, &mut r), Status::Ok);
        let expected = ["0", "1", "-1", "2", "-5"];
        for (k, want) in expected.iter().enumerate() {
            let mut text = ptr::null_mut();
            assert_eq!(expseries_series_coeff(r, k, &mut text), Status::Ok);
            assert_eq!(&take_string(text), want, "coefficient {k}");
        }
        expseries_series_free(r);
        expseries_series_free(s);
    }
}

#[test]
fn decomposition_matches_the_known_table_and_inverts() {
    unsafe {
        let a = CString::new("1").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(
            expseries_series_exponential(a.as_ptr(), 8, &mut f),
            Status::Ok
        );
        let mut d = ptr::null_mut();
        assert_eq!(expseries_decompose(f, &mut d), Status::Ok);
        let mut len = 0usize;
        assert_eq!(expseries_decomposition_len(d, &mut len), Status::Ok);
        assert_eq!(len, 7);
        let mut b2 = ptr::null_mut();
        assert_eq!(
            expseries_decomposition_coefficient(d, 2, &mut b2),
            Status::Ok
        );
        assert_eq!(take_string(b2), "-1/12");
        let mut oob = ptr::null_mut();
        assert_eq!(
            expseries_decomposition_coefficient(d, 0, &mut oob),
            Status::InvalidArgument
        );

        // Reversed and negated factors applied to x give the reversion.
        let mut id = ptr::null_mut();
        assert_eq!(expseries_series_identity(8, &mut id), Status::Ok);
        let mut inv = ptr::null_mut();
        assert_eq!(
            expseries_decomposition_apply(d, id, true, true, &mut inv),
            Status::Ok
        );
        let mut rev = ptr::null_mut();
        assert_eq!(expseries_series_reversion(f, &mut rev), Status::Ok);
        for k in 0..=8usize {
            let mut a = ptr::null_mut();
            let mut b = ptr::null_mut();
            assert_eq!(expseries_series_coeff(inv, k, &mut a), Status::Ok);
            assert_eq!(expseries_series_coeff(rev, k, &mut b), Status::Ok);
            assert_eq!(take_string(a), take_string(b), "coefficient {k}");
        }
        expseries_series_free(rev);
        expseries_series_free(inv);
        expseries_series_free(id);
        expseries_decomposition_free(d);
        expseries_series_free(f);
    }
}

#[test]
fn decomposing_an_unnormalized_series_is_a_precondition_error() {
    unsafe {
        let s = series_from(&["0", "2", "1"]);
        let mut d = ptr::null_mut();
        assert_eq!(expseries_decompose(s, &mut d), Status::Precondition);
        assert!(d.is_null());
        expseries_series_free(s);
    }
}

#[test]
fn qtables_agree_between_expansion_and_recursion() {
    unsafe {
        let mut direct = ptr::null_mut();
        assert_eq!(expseries_qtable_expand(1, 3, 5, &mut direct), Status::Ok);
        let mut recursive = ptr::null_mut();
        assert_eq!(expseries_qtable_recursive(3, 8, &mut recursive), Status::Ok);
        let mut lowest = 0i64;
        assert_eq!(expseries_qtable_lowest(direct, &mut lowest), Status::Ok);
        assert_eq!(lowest, -3);
        let mut top = 0i64;
        assert_eq!(expseries_qtable_top(direct, &mut top), Status::Ok);
        assert_eq!(top, 5);
        for k in -3..=5i64 {
            let mut a = ptr::null_mut();
            let mut b = ptr::null_mut();
            assert_eq!(expseries_qtable_value(direct, k, &mut a), Status::Ok);
            assert_eq!(expseries_qtable_value(recursive, k, &mut b), Status::Ok);
            assert_eq!(take_string(a), take_string(b), "exponent {k}");
        }
        // Below the window the coefficient is provably zero; above the
        // stored top it is unknown and refused.
        let mut below = ptr::null_mut();
        assert_eq!(expseries_qtable_value(direct, -4, &mut below), Status::Ok);
        assert_eq!(take_string(below), "0");
        let mut above = ptr::null_mut();
        assert_eq!(
            expseries_qtable_value(direct, 6, &mut above),
            Status::InvalidArgument
        );
        assert!(above.is_null());
        expseries_qtable_free(recursive);
        expseries_qtable_free(direct);

        let mut bad = ptr::null_mut();
        assert_eq!(
            expseries_qtable_expand(1, 2, -5, &mut bad),
            Status::InvalidArgument
        );
    }
}

#[test]
fn scalar_helpers_return_exact_strings() {
    unsafe {
        let mut b12 = ptr::null_mut();
        assert_eq!(expseries_bernoulli_number(12, &mut b12), Status::Ok);
        assert_eq!(take_string(b12), "-691/2730");

        let t = CString::new("3").unwrap();
        let mut b2_at_3 = ptr::null_mut();
        assert_eq!(
            expseries_bernoulli_polynomial(2, t.as_ptr(), &mut b2_at_3),
            Status::Ok
        );
        assert_eq!(take_string(b2_at_3), "37/6");

        let mut formula = ptr::null_mut();
        let mut oracle = ptr::null_mut();
        assert_eq!(expseries_residue_formula(3, 2, &mut formula), Status::Ok);
        assert_eq!(expseries_residue_oracle(3, 2, &mut oracle), Status::Ok);
        let formula = take_string(formula);
        assert_eq!(formula, "2");
        assert_eq!(formula, take_string(oracle));

        let mut none = ptr::null_mut();
        assert_eq!(
            expseries_residue_formula(3, 0, &mut none),
            Status::Precondition
        );

        let mut c = ptr::null_mut();
        assert_eq!(
            expseries_commutator_coefficient(2, -2, 2, 1, &mut c),
            Status::Ok
        );
        assert_eq!(take_string(c), "3");
        let mut below = ptr::null_mut();
        assert_eq!(
            expseries_commutator_coefficient(2, -2, 0, 1, &mut below),
            Status::Ok
        );
        assert_eq!(take_string(below), "0");
    }
}

#[test]
fn hostile_inputs_get_clean_statuses() {
    unsafe {
        // Null pointers in every position.
        assert_eq!(
            expseries_series_new(ptr::null(), 1, ptr::null_mut()),
            Status::NullArgument
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            expseries_series_new(ptr::null(), 1, &mut out),
            Status::NullArgument
        );
        assert_eq!(expseries_series_order(ptr::null(), &mut 0), Status::NullArgument);

        // Unparseable coefficient text.
        let bad = CString::new("1/0").unwrap();
        let ptrs = [bad.as_ptr()];
        assert_eq!(
            expseries_series_new(ptrs.as_ptr(), 1, &mut out),
            Status::ParseError
        );
        let garbage = CString::new("x+1").unwrap();
        assert_eq!(
            expseries_series_exponential(garbage.as_ptr(), 4, &mut out),
            Status::ParseError
        );

        // Extents beyond the cap, and overflowing index arithmetic.
        let a = CString::new("1").unwrap();
        assert_eq!(
            expseries_series_exponential(a.as_ptr(), usize::MAX, &mut out),
            Status::InvalidArgument
        );
        assert_eq!(expseries_series_identity(0, &mut out), Status::InvalidArgument);
        let mut table = ptr::null_mut();
        assert_eq!(
            expseries_qtable_expand(1, i64::MAX, i64::MAX, &mut table),
            Status::InvalidArgument
        );
        assert_eq!(
            expseries_qtable_recursive(i64::MIN, 4, &mut table),
            Status::InvalidArgument
        );
        let mut text = ptr::null_mut();
        assert_eq!(
            expseries_residue_formula(1, i64::MAX, &mut text),
            Status::InvalidArgument
        );
        assert_eq!(
            expseries_commutator_coefficient(0, 0, i64::MAX, i64::MIN, &mut text),
            Status::InvalidArgument
        );
        assert_eq!(
            expseries_commutator_coefficient(i64::MAX, i64::MIN, 1, 0, &mut text),
            Status::InvalidArgument
        );

        // Frees of null are no-ops.
        expseries_series_free(ptr::null_mut());
        expseries_decomposition_free(ptr::null_mut());
        expseries_qtable_free(ptr::null_mut());
        expseries_string_free(ptr::null_mut());
    }
}
