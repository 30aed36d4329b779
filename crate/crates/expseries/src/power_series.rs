//! Truncated formal power series with exact rational coefficients.
//!
//! A [`PowerSeries`] stores the coefficients of `x^0 .. x^order` densely.
//! `order` is the truncation order: coefficients beyond it are *unknown*,
//! not zero. The kernel maintains one invariant everywhere: a coefficient is
//! reported only when it is fully determined by the stored coefficients of
//! the inputs. Binary operations therefore truncate to the smaller operand
//! order, and there is no way to extend a series beyond what is known.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rational::Rational;

/// Power series truncated at a known order.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    /// `coeffs[k]` is the coefficient of `x^k`; `coeffs.len() == order + 1`.
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series with the given coefficients for `x^0 ..= x^{len-1}`.
    ///
    /// Panics if `coeffs` is empty: a series with no known coefficients is
    /// not representable.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        PowerSeries { coeffs }
    }

    /// The zero series truncated at `order`.
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    /// The constant series 1 truncated at `order`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// The series `x` truncated at `order`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// `c * x^degree` truncated at `order`. Panics if `degree > order`.
    pub fn monomial(c: Rational, degree: usize, order: usize) -> Self {
        assert!(degree <= order, "monomial degree exceeds truncation order");
        let mut s = Self::zero(order);
        s.coeffs[degree] = c;
        s
    }

    /// Truncation order: coefficients of `x^0 ..= x^order` are known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`. Panics beyond the truncation order; a stored
    /// window is never silently extended with zeros.
    pub fn coeff(&self, k: usize) -> &Rational {
        assert!(
            k <= self.order(),
            "coefficient {k} beyond truncation order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// True when every stored coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Copy truncated to a smaller (or equal) order. Panics if `order`
    /// exceeds the stored order: truncation can only forget.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend a series from order {} to {order}",
            self.order()
        );
        PowerSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Scalar multiple, same order.
    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product truncated at the smaller operand order.
    fn mul_impl(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Nonnegative integer power by repeated squaring, truncated at the
    /// receiver's order.
    pub fn pow(&self, mut exp: u32) -> Self {
        let order = self.order();
        let mut base = self.clone();
        let mut acc = Self::one(order);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse: `self * reciprocal(self) = 1` through the
    /// stored order. Requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self, Error> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ConstantTermZero);
        }
        let order = self.order();
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![Rational::zero(); order + 1];
        out[0] = inv0.clone();
        for n in 1..=order {
            let mut s = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    s += &(&self.coeffs[k] * &out[n - k]);
                }
            }
            out[n] = -(&inv0 * &s);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Substitution `self(inner)`, truncated at the smaller operand order.
    /// Requires `inner` to have zero constant term, otherwise every output
    /// coefficient would be an infinite sum.
    pub fn compose(&self, inner: &Self) -> Result<Self, Error> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero {
                op: "compose",
                found: inner.coeffs[0].clone(),
            });
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncated(order);
        // Horner evaluation: acc <- acc * inner + c_k for k = order .. 0.
        let mut acc = Self::zero(order);
        acc.coeffs[0] = self.coeffs[order].clone();
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Exponential of a series with zero constant term, same order.
    ///
    /// Solved coefficientwise from `out' = self' * out`, which gives
    /// `n * out_n = sum_{k=1..n} k * self_k * out_{n-k}`.
    pub fn exp(&self) -> Result<Self, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero {
                op: "exp",
                found: self.coeffs[0].clone(),
            });
        }
        let order = self.order();
        let mut out = vec![Rational::zero(); order + 1];
        out[0] = Rational::one();
        for n in 1..=order {
            let mut s = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    s += &(&(Rational::from_int(k as i64) * &self.coeffs[k]) * &out[n - k]);
                }
            }
            out[n] = s / Rational::from_int(n as i64);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Logarithm of a series with constant term 1, same order.
    ///
    /// Solved from `self * log' = self'`:
    /// `n * log_n = n * self_n - sum_{k=1..n-1} k * log_k * self_{n-k}`.
    pub fn log(&self) -> Result<Self, Error> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne {
                found: self.coeffs[0].clone(),
            });
        }
        let order = self.order();
        let mut out = vec![Rational::zero(); order + 1];
        for n in 1..=order {
            let mut s = &Rational::from_int(n as i64) * &self.coeffs[n];
            for (k, l_k) in out.iter().enumerate().take(n).skip(1) {
                if !l_k.is_zero() && !self.coeffs[n - k].is_zero() {
                    s -= &(&(Rational::from_int(k as i64) * l_k) * &self.coeffs[n - k]);
                }
            }
            out[n] = s / Rational::from_int(n as i64);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Compositional inverse: `compose(self, out) = x` through the stored
    /// order. Requires the normalized shape `x + O(x^2)` with linear
    /// coefficient exactly 1.
    ///
    /// Determined order by order: once `out` is correct through degree
    /// `n - 1`, the degree-`n` coefficient of `compose(self, out)` equals
    /// the still-missing `out_n` plus terms that only involve known data, so
    /// forcing that coefficient to zero pins `out_n` down.
    pub fn reversion(&self) -> Result<Self, Error> {
        if !self.coeffs[0].is_zero() || !self.coeffs[1].is_one() {
            return Err(Error::NotNormalized {
                op: "reversion",
                constant: self.coeffs[0].clone(),
                linear: self.coeffs[1].clone(),
            });
        }
        let order = self.order();
        let mut out = Self::identity(order);
        for n in 2..=order {
            let c = self
                .truncated(n)
                .compose(&out.truncated(n))
                .expect("inverse candidate keeps zero constant term");
            out.coeffs[n] = -&c.coeffs[n];
        }
        Ok(out)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] + &rhs.coeffs[k])
                .collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] - &rhs.coeffs[k])
                .collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for PowerSeries {
    /// Human form, truncation made explicit: `x + 1/2*x^2 + O(x^3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        match self.order() + 1 {
            1 => write!(f, " + O(x)"),
            next => write!(f, " + O(x^{next})"),
        }
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct PowerSeriesRepr {
    order: usize,
    coeffs: Vec<Rational>,
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PowerSeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PowerSeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "series of order {} must carry {} coefficients, found {}",
                repr.order,
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        Ok(PowerSeries {
            coeffs: repr.coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn int(n: i64) -> Rational {
        Rational::from_int(n)
    }

    /// `e^x - 1` truncated at `order`.
    fn exp_minus_one(order: usize) -> PowerSeries {
        let coeffs = (0..=order as u64)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    Rational::factorial(k).recip()
                }
            })
            .collect();
        PowerSeries::from_coeffs(coeffs)
    }

    /// `(e^x - 1)/x` truncated at `order`.
    fn exp_minus_one_over_x(order: usize) -> PowerSeries {
        PowerSeries::from_coeffs(
            (0..=order as u64)
                .map(|k| Rational::factorial(k + 1).recip())
                .collect(),
        )
    }

    #[test]
    fn binary_ops_truncate_to_smaller_order() {
        let a = PowerSeries::one(7);
        let b = PowerSeries::identity(3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a - &b).order(), 3);
    }

    #[test]
    fn square_of_exp_minus_one() {
        let f = exp_minus_one(4);
        let sq = &f * &f;
        let expected = PowerSeries::from_coeffs(vec![
            int(0),
            int(0),
            int(1),
            int(1),
            q(7, 12),
        ]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn reciprocal_of_exp_minus_one_over_x() {
        let r = exp_minus_one_over_x(2).reciprocal().unwrap();
        let expected = PowerSeries::from_coeffs(vec![int(1), q(-1, 2), q(1, 12)]);
        assert_eq!(r, expected);
    }

    #[test]
    fn reciprocal_is_inverse() {
        let f = exp_minus_one_over_x(12);
        let r = f.reciprocal().unwrap();
        assert_eq!(&f * &r, PowerSeries::one(12));
    }

    #[test]
    fn reciprocal_requires_unit_constant() {
        assert_eq!(
            PowerSeries::identity(3).reciprocal(),
            Err(Error::ConstantTermZero)
        );
    }

    #[test]
    fn compose_substitutes() {
        // (1 + x)^2 composed with x + x^2.
        let outer = PowerSeries::from_coeffs(vec![int(1), int(2), int(1), int(0)]);
        let inner = PowerSeries::from_coeffs(vec![int(0), int(1), int(1), int(0)]);
        let got = outer.compose(&inner).unwrap();
        // 1 + 2(x + x^2) + (x + x^2)^2 = 1 + 2x + 3x^2 + 2x^3 + ...
        assert_eq!(
            got,
            PowerSeries::from_coeffs(vec![int(1), int(2), int(3), int(2)])
        );
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        let outer = PowerSeries::identity(3);
        let inner = PowerSeries::one(3);
        assert!(matches!(
            outer.compose(&inner),
            Err(Error::ConstantTermNotZero { op: "compose", .. })
        ));
    }

    #[test]
    fn exp_log_frozen_values() {
        // exp(x) - computed from scratch - has coefficients 1/k!.
        let e = PowerSeries::identity(6).exp().unwrap();
        for k in 0..=6u64 {
            assert_eq!(e.coeff(k as usize), &Rational::factorial(k).recip());
        }
        // log(1 + x) has coefficients (-1)^{k+1}/k.
        let one_plus_x =
            PowerSeries::from_coeffs(vec![int(1), int(1), int(0), int(0), int(0), int(0)]);
        let l = one_plus_x.log().unwrap();
        assert_eq!(l.coeff(0), &int(0));
        for k in 1..=5i64 {
            let expected = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k);
            assert_eq!(l.coeff(k as usize), &expected);
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let f = PowerSeries::from_coeffs(vec![
            int(0),
            q(1, 2),
            q(-2, 3),
            int(5),
            q(7, 4),
            q(-1, 6),
        ]);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
        let g = PowerSeries::from_coeffs(vec![int(1), q(3, 2), q(-1, 3), int(2), q(5, 8), int(9)]);
        assert_eq!(g.log().unwrap().exp().unwrap(), g);
    }

    #[test]
    fn exp_log_preconditions() {
        assert!(matches!(
            PowerSeries::one(3).exp(),
            Err(Error::ConstantTermNotZero { op: "exp", .. })
        ));
        assert!(matches!(
            PowerSeries::identity(3).log(),
            Err(Error::ConstantTermNotOne { .. })
        ));
    }

    #[test]
    fn reversion_of_x_plus_x_squared() {
        let f = PowerSeries::from_coeffs(vec![int(0), int(1), int(1), int(0)]);
        let inv = f.reversion().unwrap();
        assert_eq!(
            inv,
            PowerSeries::from_coeffs(vec![int(0), int(1), int(-1), int(2)])
        );
    }

    #[test]
    fn reversion_round_trip() {
        let f = exp_minus_one(10);
        let inv = f.reversion().unwrap();
        assert_eq!(f.compose(&inv).unwrap(), PowerSeries::identity(10));
        assert_eq!(inv.compose(&f).unwrap(), PowerSeries::identity(10));
        // log(1 + x) is the exact inverse of e^x - 1.
        for k in 1..=10i64 {
            let expected = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k);
            assert_eq!(inv.coeff(k as usize), &expected);
        }
    }

    #[test]
    fn reversion_requires_normalized_input() {
        let f = PowerSeries::from_coeffs(vec![int(0), int(2), int(1)]);
        assert!(matches!(
            f.reversion(),
            Err(Error::NotNormalized { op: "reversion", .. })
        ));
    }

    #[test]
    fn truncation_is_sound() {
        // Computing at high order and truncating equals computing low.
        let f = exp_minus_one(12);
        let g = exp_minus_one_over_x(12);
        assert_eq!((&f * &g).truncated(5), &f.truncated(5) * &g.truncated(5));
        assert_eq!(
            f.reversion().unwrap().truncated(6),
            f.truncated(6).reversion().unwrap()
        );
        assert_eq!(
            g.reciprocal().unwrap().truncated(6),
            g.truncated(6).reciprocal().unwrap()
        );
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = exp_minus_one_over_x(8);
        let mut acc = PowerSeries::one(8);
        for e in 0..5u32 {
            assert_eq!(f.pow(e), acc);
            acc = &acc * &f;
        }
        assert_eq!(PowerSeries::zero(4).pow(0), PowerSeries::one(4));
    }

    #[test]
    #[should_panic(expected = "beyond truncation order")]
    fn coeff_beyond_order_panics() {
        let f = PowerSeries::one(2);
        let _ = f.coeff(3);
    }

    #[test]
    #[should_panic(expected = "cannot extend")]
    fn truncated_cannot_extend() {
        let _ = PowerSeries::one(2).truncated(5);
    }

    #[test]
    fn display_form() {
        let f = PowerSeries::from_coeffs(vec![int(0), int(1), q(-1, 2), int(0), q(1, 4)]);
        assert_eq!(f.to_string(), "x - 1/2*x^2 + 1/4*x^4 + O(x^5)");
        assert_eq!(PowerSeries::zero(2).to_string(), "0 + O(x^3)");
        assert_eq!(
            PowerSeries::from_coeffs(vec![int(-1), int(-1)]).to_string(),
            "-1 - x + O(x^2)"
        );
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let f = PowerSeries::from_coeffs(vec![int(0), int(1), q(-7, 24)]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"order":2,"coeffs":["0","1","-7/24"]}"#);
        let back: PowerSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"order":3,"coeffs":["0","1"]}"#;
        assert!(serde_json::from_str::<PowerSeries>(bad).is_err());
    }
}
