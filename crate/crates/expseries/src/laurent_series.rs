//! Truncated Laurent series: finitely many negative exponents, truncated
//! above like a power series.
//!
//! A [`LaurentSeries`] stores a dense window of coefficients for the
//! exponents `lowest ..= top`. Everything below `lowest` is identically zero
//! *by construction*, everything above `top` is unknown. The two directions
//! are deliberately kept distinct: a query below the window is answered "zero
//! and provably so", a query above it is refused. Producers record the
//! `lowest` they constructed even when the leading stored coefficient happens
//! to vanish, so the window documents what was built, not what is nonzero.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::power_series::PowerSeries;
use crate::rational::Rational;

/// Laurent series with known window `lowest ..= top`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    lowest: i64,
    /// `coeffs[i]` is the coefficient of `x^{lowest + i}`; never empty.
    coeffs: Vec<Rational>,
}

impl LaurentSeries {
    /// `series * x^shift`: reinterprets a power series as a Laurent series
    /// whose window starts at `shift`.
    pub fn from_power_series(series: &PowerSeries, shift: i64) -> Self {
        LaurentSeries {
            lowest: shift,
            coeffs: series.coeffs().to_vec(),
        }
    }

    /// Window of exponents `lowest ..= top` with the given coefficients.
    /// Panics if `coeffs` is empty.
    pub fn from_window(lowest: i64, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a Laurent window cannot be empty");
        LaurentSeries { lowest, coeffs }
    }

    /// Lowest exponent the series was constructed with. Coefficients below
    /// it are identically zero.
    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    /// Highest exponent with a determined coefficient.
    pub fn top(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    /// Stored coefficients for `lowest ..= top`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` for `k` inside the window.
    ///
    /// Outside the window the query is refused, with the reason split by
    /// direction: below `lowest` the coefficient is identically zero (the
    /// error says so), above `top` it is simply not determined.
    pub fn coefficient(&self, k: i64) -> Result<&Rational, Error> {
        if k < self.lowest {
            Err(Error::BelowWindow {
                k,
                lowest: self.lowest,
            })
        } else if k > self.top() {
            Err(Error::BeyondTruncation { k, top: self.top() })
        } else {
            Ok(&self.coeffs[(k - self.lowest) as usize])
        }
    }

    /// Coefficient of `x^k`, resolving provably-zero queries below the
    /// window to 0. Queries above the window are still refused.
    pub fn known_coefficient(&self, k: i64) -> Result<Rational, Error> {
        match self.coefficient(k) {
            Ok(c) => Ok(c.clone()),
            Err(Error::BelowWindow { .. }) => Ok(Rational::zero()),
            Err(e) => Err(e),
        }
    }

    /// Coefficient of `x^{-1}`. Zero when the window starts above `-1`;
    /// refused when the window is truncated below `-1`.
    pub fn residue(&self) -> Result<Rational, Error> {
        self.known_coefficient(-1)
    }

    /// Product of two Laurent windows.
    ///
    /// The result window is `[l1 + l2, min(l1 + t2, l2 + t1)]`: beyond that
    /// top, coefficients would pick up contributions from the unknown tails,
    /// so the window is clipped exactly as power-series multiplication clips
    /// to the smaller order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let lowest = self.lowest + rhs.lowest;
        let top = (self.lowest + rhs.top()).min(rhs.lowest + self.top());
        let len = (top - lowest + 1) as usize;
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(len - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        LaurentSeries {
            lowest,
            coeffs: out,
        }
    }
}

impl fmt::Display for LaurentSeries {
    /// Human form with explicit truncation: `x^-2 - 1/2*x^-1 + 5/12 + O(x)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.lowest + i as i64;
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
        match self.top() + 1 {
            0 => write!(f, " + O(1)"),
            1 => write!(f, " + O(x)"),
            next => write!(f, " + O(x^{next})"),
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentSeriesRepr {
    lowest: i64,
    top: i64,
    coeffs: Vec<Rational>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LaurentSeriesRepr {
            lowest: self.lowest,
            top: self.top(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = LaurentSeriesRepr::deserialize(deserializer)?;
        let expected = repr
            .top
            .checked_sub(repr.lowest)
            .and_then(|d| d.checked_add(1));
        if expected != Some(repr.coeffs.len() as i64) || repr.coeffs.is_empty() {
            return Err(D::Error::custom(format!(
                "window [{}, {}] must carry {} coefficients, found {}",
                repr.lowest,
                repr.top,
                repr.top - repr.lowest + 1,
                repr.coeffs.len()
            )));
        }
        Ok(LaurentSeries {
            lowest: repr.lowest,
            coeffs: repr.coeffs,
        })
    }
}
