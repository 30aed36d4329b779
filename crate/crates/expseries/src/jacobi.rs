//! Generalized binomials, residues of `e^{my}/(e^y - 1)^n`, and the
//! commutator coefficient tables they govern.
//!
//! The residue in question has a closed form: for `n >= 1`,
//!
//! ```text
//! Res_y e^{my}/(e^y - 1)^n  =  C(m - 1, n - 1)
//! ```
//!
//! with `C` the generalized binomial coefficient (integer top, possibly
//! negative). The same binomials show up as the structure constants of
//! commutators `[D^{(w)}, y^{(j)}]` between weighted derivations and
//! multiplication operators: the entry at bidegree `(j, k)` with ambient
//! weight `n` is `C(w - j - 1, k - n)` above the diagonal `k >= n` and zero
//! below it. [`residue_oracle`] recomputes everything by direct expansion so
//! the closed forms can be checked from scratch.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bernoulli::q_series;
use crate::error::Error;
use crate::rational::Rational;

/// Generalized binomial coefficient `C(top, bottom)` with integer (possibly
/// negative) top: the falling factorial `top (top-1) ... (top-bottom+1)`
/// divided by `bottom!`. Always an integer for integer top, though the
/// return type stays [`Rational`] for uniformity with the tables it fills.
pub fn generalized_binomial(top: i64, bottom: u32) -> Rational {
    let mut numer = BigInt::from(1);
    for i in 0..bottom as i64 {
        numer *= BigInt::from(top - i);
    }
    let value = Rational::from_bigint(numer) / Rational::factorial(bottom as u64);
    debug_assert!(value.is_integer(), "binomial with integer top must be integral");
    value
}

/// Closed form of the residue: `Res_y e^{my}/(e^y - 1)^n = C(m-1, n-1)`.
/// Requires `n >= 1`; without a pole there is nothing to take a residue of.
/// Panics when `n - 1` does not fit in `u32`; a product that long is not
/// computable anyway, and a truncated cast would silently change the answer.
pub fn residue_formula(m: i64, n: i64) -> Result<Rational, Error> {
    if n < 1 {
        return Err(Error::NonPositivePower { n });
    }
    let bottom = u32::try_from(n - 1).expect("pole order n - 1 must fit in u32");
    Ok(generalized_binomial(m - 1, bottom))
}

/// The same residue computed from scratch: expand `e^{my}/(e^y - 1)^n`
/// through exponent 0 and read off the coefficient of `y^{-1}`.
pub fn residue_oracle(m: i64, n: i64) -> Result<Rational, Error> {
    if n < 1 {
        return Err(Error::NonPositivePower { n });
    }
    let table = q_series(m, n, 0).expect("window [-n, 0] is valid for n >= 1");
    Ok(table
        .series()
        .residue()
        .expect("window [-n, 0] contains -1 for n >= 1"))
}

/// Position of one commutator coefficient: `[D^{(w)}, y^{(j)}]` acting in
/// ambient weight `n`, component at bidegree `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoefficientQuery {
    pub w: i64,
    pub j: i64,
    pub k: i64,
    pub n: i64,
}

/// The commutator coefficient: `C(w - j - 1, k - n)` for `k >= n`, zero
/// below the diagonal. Total on every query small enough to evaluate;
/// panics when `k - n` does not fit in `u32` or `w - j - 1` overflows,
/// rather than truncating either silently.
pub fn commutator_coefficient(query: &CoefficientQuery) -> Rational {
    if query.k < query.n {
        return Rational::zero();
    }
    let offset = query
        .k
        .checked_sub(query.n)
        .expect("offset k - n must fit in i64");
    let bottom = u32::try_from(offset).expect("offset k - n must fit in u32");
    let top = query
        .w
        .checked_sub(query.j)
        .and_then(|t| t.checked_sub(1))
        .expect("w - j - 1 must fit in i64");
    generalized_binomial(top, bottom)
}

/// One emitted table entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub j: i64,
    pub k: i64,
    pub value: Rational,
}

/// Grid of commutator coefficients at fixed `w` and `n`, rows ordered by
/// `j` then `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub w: i64,
    pub n: i64,
    pub rows: Vec<CoefficientRow>,
}

impl CoefficientTable {
    /// CSV rows `w,n,j,k,value` in emission order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,n,j,k,value\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.w, self.n, row.j, row.k, row.value
            ));
        }
        out
    }

    /// Parses the `to_csv` format back; `w` and `n` must be consistent.
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some("w,n,j,k,value") => {}
            other => return Err(format!("expected header \"w,n,j,k,value\", found {other:?}")),
        }
        let mut wn: Option<(i64, i64)> = None;
        let mut rows = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            let [fw, fn_, fj, fk, fv] = fields[..] else {
                return Err(format!("expected 5 fields, found {line:?}"));
            };
            let rw: i64 = fw.parse().map_err(|_| format!("bad w in {line:?}"))?;
            let rn: i64 = fn_.parse().map_err(|_| format!("bad n in {line:?}"))?;
            let rj: i64 = fj.parse().map_err(|_| format!("bad j in {line:?}"))?;
            let rk: i64 = fk.parse().map_err(|_| format!("bad k in {line:?}"))?;
            let rv: Rational = fv.parse().map_err(|_| format!("bad value in {line:?}"))?;
            match wn {
                None => wn = Some((rw, rn)),
                Some(prev) if prev == (rw, rn) => {}
                _ => return Err(format!("inconsistent w or n in {line:?}")),
            }
            rows.push(CoefficientRow {
                j: rj,
                k: rk,
                value: rv,
            });
        }
        let Some((w, n)) = wn else {
            return Err("table has no rows".to_owned());
        };
        Ok(CoefficientTable { w, n, rows })
    }
}

/// Emits the grid of commutator coefficients over inclusive ranges of `j`
/// and `k` at fixed `w` and `n`.
///
/// `k_range` must start at or above the diagonal `k = n`: entries below it
/// are identically zero and deliberately not part of any table.
pub fn coefficient_table(
    w: i64,
    n: i64,
    j_range: RangeInclusive<i64>,
    k_range: RangeInclusive<i64>,
) -> Result<CoefficientTable, Error> {
    if *k_range.start() < n {
        return Err(Error::RowsBelowDiagonal {
            n,
            k_start: *k_range.start(),
        });
    }
    let mut rows = Vec::new();
    for j in j_range {
        for k in k_range.clone() {
            rows.push(CoefficientRow {
                j,
                k,
                value: commutator_coefficient(&CoefficientQuery { w, j, k, n }),
            });
        }
    }
    Ok(CoefficientTable { w, n, rows })
}

/// One residue comparison row: closed form next to the freshly expanded
/// value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRow {
    pub m: i64,
    pub n: i64,
    pub residue: Rational,
}

/// Residue grid over inclusive ranges, values from the closed form.
/// `n_range` must stay positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueTable {
    pub rows: Vec<ResidueRow>,
}

impl ResidueTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,residue\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.m, row.n, row.residue));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some("m,n,residue") => {}
            other => return Err(format!("expected header \"m,n,residue\", found {other:?}")),
        }
        let mut rows = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            let [fm, fn_, fr] = fields[..] else {
                return Err(format!("expected 3 fields, found {line:?}"));
            };
            rows.push(ResidueRow {
                m: fm.parse().map_err(|_| format!("bad m in {line:?}"))?,
                n: fn_.parse().map_err(|_| format!("bad n in {line:?}"))?,
                residue: fr.parse().map_err(|_| format!("bad residue in {line:?}"))?,
            });
        }
        Ok(ResidueTable { rows })
    }
}

/// Tabulates `Res_y e^{my}/(e^y - 1)^n` over a grid, via the closed form.
pub fn residue_table(
    m_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
) -> Result<ResidueTable, Error> {
    let mut rows = Vec::new();
    for m in m_range {
        for n in n_range.clone() {
            rows.push(ResidueRow {
                m,
                n,
                residue: residue_formula(m, n)?,
            });
        }
    }
    Ok(ResidueTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(generalized_binomial(5, 2), int(10));
        assert_eq!(generalized_binomial(0, 0), int(1));
        assert_eq!(generalized_binomial(0, 1), int(0));
        assert_eq!(generalized_binomial(-1, 3), int(-1));
        assert_eq!(generalized_binomial(-3, 2), int(6));
        assert_eq!(generalized_binomial(3, 5), int(0));
        for k in 0..=8 {
            assert_eq!(
                generalized_binomial(-1, k),
                int(if k % 2 == 0 { 1 } else { -1 }),
                "C(-1, {k})"
            );
        }
    }

    #[test]
    fn binomials_are_integral() {
        for top in -10..=10 {
            for bottom in 0..=10u32 {
                assert!(
                    generalized_binomial(top, bottom).is_integer(),
                    "C({top}, {bottom})"
                );
            }
        }
    }

    #[test]
    fn pascal_recurrence_with_negative_top() {
        for top in -8..=8 {
            for bottom in 1..=8u32 {
                let whole = generalized_binomial(top, bottom);
                let split = generalized_binomial(top - 1, bottom - 1)
                    + generalized_binomial(top - 1, bottom);
                assert_eq!(whole, split, "C({top}, {bottom})");
            }
        }
    }

    #[test]
    fn residue_spot_values() {
        // Res e^{0y}/(e^y-1)^2 = C(-1, 1) = -1; Res e^{3y}/(e^y-1)^2 = C(2,1) = 2.
        assert_eq!(residue_formula(0, 2).unwrap(), int(-1));
        assert_eq!(residue_formula(3, 2).unwrap(), int(2));
        assert_eq!(residue_oracle(0, 2).unwrap(), int(-1));
        assert_eq!(residue_oracle(3, 2).unwrap(), int(2));
        // simple pole: residue 1 regardless of m
        for m in -4..=4 {
            assert_eq!(residue_formula(m, 1).unwrap(), int(1));
            assert_eq!(residue_oracle(m, 1).unwrap(), int(1));
        }
    }

    #[test]
    fn residue_requires_pole() {
        assert!(matches!(
            residue_formula(3, 0),
            Err(Error::NonPositivePower { n: 0 })
        ));
        assert!(matches!(
            residue_oracle(3, -2),
            Err(Error::NonPositivePower { n: -2 })
        ));
    }

    #[test]
    fn formula_matches_oracle_sample() {
        for m in -6..=6 {
            for n in 1..=6 {
                assert_eq!(
                    residue_formula(m, n).unwrap(),
                    residue_oracle(m, n).unwrap(),
                    "(m, n) = ({m}, {n})"
                );
            }
        }
    }

    #[test]
    fn commutator_vanishes_below_diagonal() {
        for k in -5..2 {
            let q = CoefficientQuery { w: 3, j: 1, k, n: 2 };
            assert_eq!(commutator_coefficient(&q), int(0), "k = {k}");
        }
    }

    #[test]
    fn commutator_closed_form_on_diagonal_strip() {
        // k = n: C(w - j - 1, 0) = 1 always.
        for w in -3..=3 {
            for j in -3..=3 {
                let q = CoefficientQuery { w, j, k: 0, n: 0 };
                assert_eq!(commutator_coefficient(&q), int(1));
            }
        }
        // w = 2, j = 1, n = 0: row C(0, k) = delta_{k,0}.
        for k in 0..=4 {
            let q = CoefficientQuery { w: 2, j: 1, k, n: 0 };
            assert_eq!(
                commutator_coefficient(&q),
                int(if k == 0 { 1 } else { 0 })
            );
        }
    }

    #[test]
    fn table_requires_rows_on_or_above_diagonal() {
        assert!(matches!(
            coefficient_table(1, 2, -1..=1, 0..=3),
            Err(Error::RowsBelowDiagonal { n: 2, k_start: 0 })
        ));
        assert!(coefficient_table(1, 2, -1..=1, 2..=3).is_ok());
    }

    #[test]
    fn table_matches_pointwise_queries() {
        let t = coefficient_table(2, -1, -2..=2, -1..=3).unwrap();
        assert_eq!(t.rows.len(), 25);
        for row in &t.rows {
            let q = CoefficientQuery {
                w: 2,
                j: row.j,
                k: row.k,
                n: -1,
            };
            assert_eq!(row.value, commutator_coefficient(&q));
        }
    }

    #[test]
    fn coefficient_table_csv_round_trip() {
        let t = coefficient_table(2, 0, -2..=2, 0..=4).unwrap();
        let csv = t.to_csv();
        let back = CoefficientTable::from_csv(&csv).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv(), csv);
    }

    #[test]
    fn residue_table_csv_round_trip() {
        let t = residue_table(-3..=3, 1..=4).unwrap();
        assert_eq!(t.rows.len(), 28);
        let csv = t.to_csv();
        let back = ResidueTable::from_csv(&csv).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv(), csv);
    }
}
