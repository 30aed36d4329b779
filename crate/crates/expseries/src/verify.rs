//! Cross-checks between independent computation paths.
//!
//! Every check here ties two implementations together: composition against
//! reversion, the index recursion against direct series expansion, closed
//! residue forms against extraction from a Laurent window. A passing report
//! means the exact-arithmetic layers agree with each other on grids large
//! enough to make coincidence implausible. Randomized checks draw from a
//! seeded stream, so a report is reproducible from its seed alone.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bernoulli::{
    bernoulli_numbers, bernoulli_polynomial_value, convolution_check_cached, divisibility_check,
    expansion_polynomial, q_recursive, q_series, weighted_convolution_check_cached, QCache,
};
use crate::changevar::{
    apply_decomposition, cbh_check, decompose, exponential_change, odd_vanishing_report,
};
use crate::jacobi::{
    commutator_coefficient, generalized_binomial, residue_formula, residue_oracle,
    CoefficientQuery,
};
use crate::power_series::PowerSeries;
use crate::rational::Rational;

/// Which families of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Series,
    ChangeOfVariable,
    Bernoulli,
    Jacobi,
}

/// Result of one named check: a batch of exact comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons the check performed.
    pub cases: u64,
    /// Summary of what was compared on success, first failing case on
    /// failure.
    pub detail: String,
}

/// Outcome of a [`run`]: one entry per executed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn total_cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed { "ok" } else { "FAIL" };
            writeln!(
                f,
                "{status:<4} {name:<width$} {cases:>6} cases  {detail}",
                name = c.name,
                cases = c.cases,
                detail = c.detail,
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        if failed == 0 {
            write!(
                f,
                "{} checks, {} cases, all passed",
                self.checks.len(),
                self.total_cases()
            )
        } else {
            write!(
                f,
                "{} checks, {} cases, {failed} FAILED",
                self.checks.len(),
                self.total_cases()
            )
        }
    }
}

/// Accumulator for one check: counts comparisons, keeps the first failure.
struct Check {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn done(self, summary: String) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            passed: self.failure.is_none(),
            cases: self.cases,
            detail: self.failure.unwrap_or(summary),
        }
    }
}

/// Runs the selected checks and collects their outcomes.
///
/// `max_order` bounds the truncation order of the randomized series checks;
/// the grid-based identity checks use their own fixed ranges. Orders below 4
/// are raised to 4. Each check derives its own random stream from `seed`, so
/// the same seed always reproduces the same report and narrowing the suite
/// never changes the cases an included check sees.
pub fn run(suite: Suite, max_order: usize, seed: u64) -> VerifyReport {
    let order = max_order.max(4);
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Series) {
        checks.push(check_exp_log(order, seed));
        checks.push(check_reversion(order, seed));
        checks.push(check_reciprocal(order, seed));
        checks.push(check_truncation(order, seed));
        checks.push(check_json(order, seed));
    }
    if matches!(suite, Suite::All | Suite::ChangeOfVariable) {
        checks.push(check_product(order, seed));
        checks.push(check_inverse(order, seed));
        checks.push(check_cbh(order, seed));
        checks.push(check_odd_vanishing());
    }
    if matches!(suite, Suite::All | Suite::Bernoulli) {
        checks.push(check_bernoulli_numbers());
        checks.push(check_recursion());
        checks.push(check_convolution());
        checks.push(check_weighted());
        checks.push(check_polynomials());
    }
    if matches!(suite, Suite::All | Suite::Jacobi) {
        checks.push(check_residues());
        checks.push(check_commutator());
        checks.push(check_pascal());
    }
    VerifyReport { checks }
}

/// Distinct deterministic stream per check, so the set of checks that runs
/// has no influence on the random cases any single check sees.
fn stream(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    PowerSeries::from_coeffs((0..=order).map(|_| random_rational(rng)).collect())
}

/// Random series with constant term zero.
fn random_vanishing(rng: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    for c in coeffs.iter_mut().skip(1) {
        *c = random_rational(rng);
    }
    PowerSeries::from_coeffs(coeffs)
}

/// Random series with constant term one.
fn random_unit(rng: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::one(); order + 1];
    for c in coeffs.iter_mut().skip(1) {
        *c = random_rational(rng);
    }
    PowerSeries::from_coeffs(coeffs)
}

/// Random series of the normalized shape `x + O(x^2)`.
fn random_normalized(rng: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[1] = Rational::one();
    for c in coeffs.iter_mut().skip(2) {
        *c = random_rational(rng);
    }
    PowerSeries::from_coeffs(coeffs)
}

fn check_exp_log(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("series.exp-log");
    let mut rng = stream(seed, 1);
    for _ in 0..8 {
        let f = random_vanishing(&mut rng, order);
        let back = f
            .exp()
            .expect("constant term is zero")
            .log()
            .expect("exp has constant term one");
        c.case(back == f, || format!("log(exp(f)) != f for f = {f}"));
        let u = random_unit(&mut rng, order);
        let back = u
            .log()
            .expect("constant term is one")
            .exp()
            .expect("log has constant term zero");
        c.case(back == u, || format!("exp(log(u)) != u for u = {u}"));
    }
    c.done(format!("log inverts exp on random series at order {order}"))
}

fn check_reversion(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("series.reversion");
    let mut rng = stream(seed, 2);
    let id = PowerSeries::identity(order);
    for _ in 0..6 {
        let f = random_normalized(&mut rng, order);
        let r = f.reversion().expect("f is normalized");
        c.case(f.compose(&r).expect("r has constant term zero") == id, || {
            format!("f(rev(f)) != x for f = {f}")
        });
        c.case(r.compose(&f).expect("f has constant term zero") == id, || {
            format!("rev(f)(f) != x for f = {f}")
        });
        c.case(r.reversion().expect("r is normalized") == f, || {
            format!("rev(rev(f)) != f for f = {f}")
        });
    }
    c.done(format!(
        "composition with the reversion gives x at order {order}"
    ))
}

fn check_reciprocal(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("series.reciprocal");
    let mut rng = stream(seed, 3);
    let one = PowerSeries::one(order);
    for _ in 0..6 {
        let u = random_unit(&mut rng, order);
        let r = u.reciprocal().expect("constant term is nonzero");
        c.case(&u * &r == one, || format!("u * (1/u) != 1 for u = {u}"));
        c.case(
            r.reciprocal().expect("reciprocal is a unit") == u,
            || format!("1/(1/u) != u for u = {u}"),
        );
        c.case(u.pow(3) == &(&u * &u) * &u, || {
            format!("u^3 != u*u*u for u = {u}")
        });
    }
    c.done(format!(
        "reciprocal and pow agree with direct products at order {order}"
    ))
}

fn check_truncation(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("series.truncation");
    let mut rng = stream(seed, 4);
    let k = order / 2;
    for _ in 0..6 {
        let f = random_series(&mut rng, order);
        let g = random_series(&mut rng, order);
        let h = random_vanishing(&mut rng, order);
        c.case(
            (&f * &g).truncated(k) == &f.truncated(k) * &g.truncated(k),
            || format!("truncating a product disagrees at order {k}"),
        );
        c.case(
            f.compose(&h).expect("h vanishes at zero").truncated(k)
                == f.truncated(k)
                    .compose(&h.truncated(k))
                    .expect("h vanishes at zero"),
            || format!("truncating a composition disagrees at order {k}"),
        );
        c.case(
            h.exp().expect("h vanishes at zero").truncated(k)
                == h.truncated(k).exp().expect("h vanishes at zero"),
            || format!("truncating an exponential disagrees at order {k}"),
        );
    }
    c.done(format!(
        "operations commute with truncation from order {order} to {k}"
    ))
}

fn check_json(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("series.json");
    let mut rng = stream(seed, 5);
    for _ in 0..6 {
        let f = random_series(&mut rng, order);
        let text = serde_json::to_string(&f).expect("series serializes");
        let back: PowerSeries = serde_json::from_str(&text).expect("serialized series parses");
        c.case(back == f, || format!("JSON round-trip changed {f}"));
        let r = random_rational(&mut rng);
        let back: Rational = r.to_string().parse().expect("displayed rational parses");
        c.case(back == r, || format!("text round-trip changed {r}"));
    }
    c.done("JSON and text round-trips are lossless".to_string())
}

/// The four closed-form inputs plus seeded random ones, all normalized.
fn changevar_inputs(order: usize, seed: u64) -> Vec<PowerSeries> {
    let mut rng = stream(seed, 10);
    let mut inputs: Vec<PowerSeries> = [
        Rational::one(),
        Rational::from_int(2),
        Rational::new(1, 3),
        Rational::from_int(-1),
    ]
    .iter()
    .map(|a| exponential_change(a, order))
    .collect();
    for _ in 0..3 {
        inputs.push(random_normalized(&mut rng, order));
    }
    inputs
}

fn check_product(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("changevar.product");
    let order = order.max(12);
    let id = PowerSeries::identity(order);
    for f in changevar_inputs(order, seed) {
        let d = decompose(&f).expect("inputs are normalized");
        let g = apply_decomposition(&d, &id, false, false);
        c.case(g == f, || {
            format!("factored form does not reproduce f = {f}")
        });
    }
    c.done(format!(
        "factor-by-factor product rebuilds each input at order {order}"
    ))
}

fn check_inverse(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("changevar.inverse");
    let order = order.max(12);
    let id = PowerSeries::identity(order);
    for f in changevar_inputs(order, seed) {
        let d = decompose(&f).expect("inputs are normalized");
        let inv = apply_decomposition(&d, &id, true, true);
        c.case(inv == f.reversion().expect("f is normalized"), || {
            format!("reversed negated product is not the inverse of f = {f}")
        });
    }
    // For f = e^x - 1 the inverse is log(1 + x), known in closed form.
    let f = exponential_change(&Rational::one(), order);
    let d = decompose(&f).expect("e^x - 1 is normalized");
    let inv = apply_decomposition(&d, &id, true, true);
    let log1p = PowerSeries::from_coeffs(
        (0..=order)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else if k % 2 == 1 {
                    Rational::new(1, k as i64)
                } else {
                    Rational::new(-1, k as i64)
                }
            })
            .collect(),
    );
    c.case(inv == log1p, || {
        "inverse of e^x - 1 is not log(1 + x)".to_string()
    });
    c.done(format!(
        "reversed negated factors invert each input at order {order}"
    ))
}

fn check_cbh(order: usize, seed: u64) -> CheckOutcome {
    let mut c = Check::new("changevar.cbh");
    let order = order.max(12);
    for f in changevar_inputs(order, seed) {
        match cbh_check(&f) {
            Err(e) => c.case(false, || format!("check failed to run: {e}")),
            Ok(report) => c.case(report.pass(), || {
                format!(
                    "first mismatch at degree {:?} for f = {f}",
                    report.first_mismatch
                )
            }),
        }
    }
    c.done(format!(
        "product and sum forms both rebuild each input at order {order}"
    ))
}

fn check_odd_vanishing() -> CheckOutcome {
    let mut c = Check::new("changevar.odd-vanishing");
    let values = [
        Rational::one(),
        Rational::from_int(2),
        Rational::new(1, 3),
        Rational::from_int(-1),
    ];
    for a in &values {
        match odd_vanishing_report(a, 31) {
            Err(e) => c.case(false, || format!("a = {a}: report failed: {e}")),
            Ok(report) => c.case(report.pass(), || {
                format!(
                    "a = {a}: b1 matches: {}, odd nonzero at {:?}",
                    report.b1_matches, report.odd_nonzero
                )
            }),
        }
    }
    c.done("b_1 = a/2 and odd coefficients vanish at order 31".to_string())
}

fn check_bernoulli_numbers() -> CheckOutcome {
    let mut c = Check::new("bernoulli.numbers");
    let max_j = 24usize;
    let table = bernoulli_numbers(max_j);
    let q = q_series(1, 1, max_j as i64 - 1).expect("window reaches the residue");
    let mut factorial = Rational::one();
    for j in 0..=max_j {
        if j > 0 {
            factorial *= &Rational::from_int(j as i64);
        }
        let from_q = &factorial * &q.value(j as i64 - 1).expect("inside the window");
        c.case(table.value(j) == &from_q, || {
            format!("B_{j} = {} but j! q_(j-1) = {from_q}", table.value(j))
        });
    }
    c.case(table.value(1) == &Rational::new(1, 2), || {
        format!("B_1 = {}", table.value(1))
    });
    for j in (3..=max_j).step_by(2) {
        c.case(table.value(j).is_zero(), || {
            format!("B_{j} = {} is nonzero", table.value(j))
        });
    }
    for j in 0..=12usize {
        let at_one = bernoulli_polynomial_value(j, &Rational::one());
        c.case(&at_one == table.value(j), || {
            format!("B_{j}(1) = {at_one} but B_{j} = {}", table.value(j))
        });
        let at_zero = bernoulli_polynomial_value(j, &Rational::zero());
        let expected = if j == 1 {
            Rational::new(-1, 2)
        } else {
            table.value(j).clone()
        };
        c.case(at_zero == expected, || {
            format!("B_{j}(0) = {at_zero}, expected {expected}")
        });
    }
    c.done(format!(
        "numbers through B_{max_j} agree with the series and both endpoints"
    ))
}

fn check_recursion() -> CheckOutcome {
    let mut c = Check::new("bernoulli.recursion");
    for n in -8..=12i64 {
        let rec = q_recursive(n, 24);
        let dir = q_series(1, n, -n + 24).expect("window covers the offsets");
        for j in 0..=24i64 {
            let k = -n + j;
            let got = rec.value(k).expect("inside the recursive window");
            let want = dir.value(k).expect("inside the expanded window");
            c.case(got == want, || {
                format!("n = {n}, k = {k}: recursion {got}, expansion {want}")
            });
        }
    }
    c.done("recursion matches direct expansion for 21 pole orders".to_string())
}

fn check_convolution() -> CheckOutcome {
    let mut c = Check::new("bernoulli.convolution");
    let mut cache = QCache::new();
    for m in -6..=6i64 {
        for n in -6..=6i64 {
            for j in -6..=6i64 {
                let r = convolution_check_cached(m, n, j, &mut cache);
                c.case(r.pass(), || {
                    format!("m = {m}, n = {n}, j = {j}: lhs {}, rhs {}", r.lhs, r.rhs)
                });
            }
        }
    }
    c.done("quadratic identity holds on the [-6, 6] cube".to_string())
}

fn check_weighted() -> CheckOutcome {
    let mut c = Check::new("bernoulli.weighted");
    let mut cache = QCache::new();
    for m in -8..=8i64 {
        for n in -8..=8i64 {
            let r = weighted_convolution_check_cached(m, n, &mut cache);
            c.case(r.pass(), || {
                format!("m = {m}, n = {n}: lhs {}, rhs {}", r.lhs, r.rhs)
            });
        }
    }
    c.done("weighted identity holds on the [-8, 8] square".to_string())
}

fn check_polynomials() -> CheckOutcome {
    let mut c = Check::new("bernoulli.polynomials");
    for j in 0..=12u32 {
        match expansion_polynomial(j) {
            Err(e) => c.case(false, || format!("j = {j}: interpolation failed: {e}")),
            Ok(p) => {
                c.case(p.degree() == j as usize, || {
                    format!("j = {j}: degree {}", p.degree())
                });
                // Far outside both the interpolation and validation ranges.
                for n in [-20i64, 40] {
                    let direct = q_series(1, n, -n + j as i64)
                        .expect("window covers the offset")
                        .value(-n + j as i64)
                        .expect("inside the window");
                    c.case(p.evaluate_int(n) == direct, || {
                        format!(
                            "j = {j}, n = {n}: polynomial {}, series {direct}",
                            p.evaluate_int(n)
                        )
                    });
                }
            }
        }
        match divisibility_check(j) {
            Err(e) => c.case(false, || format!("j = {j}: check failed to run: {e}")),
            Ok(d) => c.case(d.pass(), || {
                format!("j = {j}: nonzero value at a forced root: {:?}", d.roots)
            }),
        }
    }
    c.done("interpolated polynomials extend the table to all integers".to_string())
}

fn check_residues() -> CheckOutcome {
    let mut c = Check::new("jacobi.residues");
    for m in -12..=12i64 {
        for n in 1..=12i64 {
            let formula = residue_formula(m, n).expect("pole order is positive");
            let oracle = residue_oracle(m, n).expect("pole order is positive");
            c.case(formula == oracle, || {
                format!("m = {m}, n = {n}: formula {formula}, series {oracle}")
            });
        }
    }
    c.done("binomial formula matches extracted residues on [-12, 12] x [1, 12]".to_string())
}

fn check_commutator() -> CheckOutcome {
    let mut c = Check::new("jacobi.commutator");
    for w in 0..=4i64 {
        for n in -2..=2i64 {
            for j in -6..=6i64 {
                for k in n..=n + 8 {
                    let got = commutator_coefficient(&CoefficientQuery { w, j, k, n });
                    let want =
                        residue_oracle(w - j, k - n + 1).expect("pole order is positive");
                    c.case(got == want, || {
                        format!("w = {w}, n = {n}, j = {j}, k = {k}: got {got}, want {want}")
                    });
                }
                for k in n - 3..n {
                    let got = commutator_coefficient(&CoefficientQuery { w, j, k, n });
                    c.case(got.is_zero(), || {
                        format!("w = {w}, n = {n}, j = {j}, k = {k}: nonzero {got} below n")
                    });
                }
            }
        }
    }
    c.done("coefficients match extracted residues and vanish below the diagonal".to_string())
}

fn check_pascal() -> CheckOutcome {
    let mut c = Check::new("jacobi.pascal");
    for t in -10..=10i64 {
        for b in 0..=10u32 {
            let v = generalized_binomial(t, b);
            c.case(v.is_integer(), || format!("C({t}, {b}) = {v} is not an integer"));
            if b >= 1 {
                let want = &generalized_binomial(t - 1, b - 1) + &generalized_binomial(t - 1, b);
                c.case(v == want, || {
                    format!("C({t}, {b}) = {v} but the recurrence gives {want}")
                });
            }
        }
    }
    c.done("binomials are integral and satisfy the addition recurrence".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let report = run(Suite::All, 8, 0);
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(report.checks.len(), 17);
        assert!(report.passed());
        assert!(report.total_cases() > 7_500);
    }

    #[test]
    fn reports_are_reproducible_from_the_seed() {
        assert_eq!(run(Suite::Series, 6, 7), run(Suite::Series, 6, 7));
    }

    #[test]
    fn narrowing_the_suite_keeps_each_checks_cases() {
        let all = run(Suite::All, 6, 3);
        let only = run(Suite::Jacobi, 6, 3);
        let subset: Vec<CheckOutcome> = all
            .checks
            .iter()
            .filter(|c| c.name.starts_with("jacobi."))
            .cloned()
            .collect();
        assert_eq!(subset, only.checks);
    }

    #[test]
    fn report_formats_as_an_aligned_table() {
        let report = run(Suite::Series, 4, 0);
        let text = report.to_string();
        assert!(text.contains("ok   series.exp-log"));
        assert!(text.ends_with("all passed"));
    }
}
