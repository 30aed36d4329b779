//! Command line front end: decompositions of a formal change of variable,
//! their sum form, the consistency check between the two, coefficient
//! tables of `e^{mx}/(e^x - 1)^n`, residue and commutator grids, and the
//! cross-check suite.
//!
//! Output is deterministic byte for byte: tables print in a fixed row
//! order, JSON fields in declaration order, and randomized checks derive
//! everything from `--seed`. Exit code 0 means success, 1 means a
//! consistency check failed, 2 means the invocation itself was bad.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use expseries::bernoulli::{q_recursive, q_series, QTable};
use expseries::changevar::{
    cbh_check, decompose, exponential_change, sum_form, CbhReport, Decomposition, SumForm,
};
use expseries::jacobi::{coefficient_table, residue_table, CoefficientTable, ResidueTable};
use expseries::verify::{self, Suite, VerifyReport};
use expseries::{PowerSeries, Rational};

#[derive(Parser)]
#[command(
    name = "expseries",
    version,
    about = "Exact power series laboratory for products of exponential derivations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; csv exists only for the table subcommands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a normalized series into exp(b_j x^{j+1} d/dx) steps.
    Decompose(SeriesArgs),
    /// Collapse the same steps into a single exponential of a derivation.
    Sumform(SeriesArgs),
    /// Check that the product and sum forms both rebuild the input.
    Cbh(SeriesArgs),
    /// Expand e^{mx}/(e^x - 1)^n through a chosen exponent.
    Qtable {
        /// Numerator exponent m.
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Pole order n; negative values mean a zero of that order.
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Highest exponent of the window; at least -n.
        #[arg(long, allow_hyphen_values = true)]
        top: i64,
    },
    /// The m = 1 family computed by the index recursion instead.
    Qrecur {
        /// Pole order n.
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Offsets past the leading exponent -n to compute.
        #[arg(long, default_value_t = 24)]
        jmax: u32,
    },
    /// Residues of e^{my}/(e^y - 1)^n over an inclusive grid.
    Residues {
        /// Range of m as A..B, both ends included.
        #[arg(long, default_value = "-12..12", allow_hyphen_values = true)]
        m: RangeArg,
        /// Range of n as A..B; must stay positive.
        #[arg(long, default_value = "1..12", allow_hyphen_values = true)]
        n: RangeArg,
    },
    /// Commutator coefficients of weighted derivations over a (j, k) grid.
    Commutator {
        /// Weight of the left derivation.
        #[arg(long, allow_hyphen_values = true)]
        w: i64,
        /// Row index; k ranges below it are rejected.
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Range of j as A..B, both ends included.
        #[arg(long, default_value = "-6..6", allow_hyphen_values = true)]
        j: RangeArg,
        /// Range of k as A..B; defaults to n..n+8.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<RangeArg>,
    },
    /// Run the cross-check suite.
    Verify {
        /// Which family of checks to run.
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Truncation order for the randomized series checks.
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        /// Seed for the randomized checks; the report is a function of it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Selects and truncates the input series of the change-of-variable
/// subcommands.
#[derive(Args)]
struct SeriesArgs {
    /// Input series: (e^{ax} - 1)/a, the identity x, or custom coefficients.
    #[arg(long, value_enum, default_value_t = Func::Exp)]
    func: Func,
    /// Parameter a of the exponential input; ignored by the others.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    a: Rational,
    /// Coefficients of x^2, x^3, ... for --func custom, comma separated;
    /// entries beyond --order are truncated away.
    #[arg(long, value_name = "C2,C3,...", allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Truncation order of the computation.
    #[arg(long, default_value_t = 15)]
    order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Func {
    Exp,
    Id,
    Custom,
}

impl SeriesArgs {
    fn build(&self) -> anyhow::Result<PowerSeries> {
        if self.order < 1 {
            bail!("--order must be at least 1");
        }
        match self.func {
            Func::Exp => Ok(exponential_change(&self.a, self.order)),
            Func::Id => Ok(PowerSeries::identity(self.order)),
            Func::Custom => {
                let text = self
                    .coeffs
                    .as_deref()
                    .context("--func custom requires --coeffs")?;
                let mut coeffs = vec![Rational::zero(); self.order + 1];
                coeffs[1] = Rational::one();
                for (i, piece) in text.split(',').enumerate() {
                    let value: Rational = piece
                        .trim()
                        .parse()
                        .map_err(|e| anyhow::anyhow!("bad coefficient {piece:?}: {e}"))?;
                    let degree = i + 2;
                    if degree <= self.order {
                        coeffs[degree] = value;
                    }
                }
                Ok(PowerSeries::from_coeffs(coeffs))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Series,
    Changevar,
    Bernoulli,
    Jacobi,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Series => Suite::Series,
            SuiteArg::Changevar => Suite::ChangeOfVariable,
            SuiteArg::Bernoulli => Suite::Bernoulli,
            SuiteArg::Jacobi => Suite::Jacobi,
        }
    }
}

/// Inclusive integer range written as `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RangeArg {
    start: i64,
    end: i64,
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected A..B, found {s:?}"))?;
        let start: i64 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad range start {a:?}"))?;
        let end: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
        if start > end {
            return Err(format!("range {s:?} runs backwards"));
        }
        Ok(RangeArg { start, end })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut code = ExitCode::SUCCESS;
    let text = match &cli.command {
        Command::Decompose(args) => {
            let d = decompose(&args.build()?)?;
            match cli.format {
                Format::Pretty => render_decomposition(&d),
                Format::Json => json(&d)?,
                Format::Csv => bail!("decompose has no CSV form; use pretty or json"),
            }
        }
        Command::Sumform(args) => {
            let s = sum_form(&args.build()?)?;
            match cli.format {
                Format::Pretty => render_sum_form(&s),
                Format::Json => json(&s)?,
                Format::Csv => bail!("sumform has no CSV form; use pretty or json"),
            }
        }
        Command::Cbh(args) => {
            let report = cbh_check(&args.build()?)?;
            if !report.pass() {
                code = ExitCode::from(1);
            }
            match cli.format {
                Format::Pretty => render_cbh(&report),
                Format::Json => json(&report)?,
                Format::Csv => bail!("cbh has no CSV form; use pretty or json"),
            }
        }
        Command::Qtable { m, n, top } => {
            let table = q_series(*m, *n, *top)?;
            render_qtable(&table, cli.format)?
        }
        Command::Qrecur { n, jmax } => {
            let table = q_recursive(*n, *jmax);
            render_qtable(&table, cli.format)?
        }
        Command::Residues { m, n } => {
            let table = residue_table(m.start..=m.end, n.start..=n.end)?;
            match cli.format {
                Format::Pretty => render_residues(&table),
                Format::Json => json(&table)?,
                Format::Csv => table.to_csv(),
            }
        }
        Command::Commutator { w, n, j, k } => {
            let k = k.unwrap_or(RangeArg {
                start: *n,
                end: *n + 8,
            });
            let table = coefficient_table(*w, *n, j.start..=j.end, k.start..=k.end)?;
            match cli.format {
                Format::Pretty => render_commutator(&table),
                Format::Json => json(&table)?,
                Format::Csv => table.to_csv(),
            }
        }
        Command::Verify {
            suite,
            max_order,
            seed,
        } => {
            let report = verify::run((*suite).into(), *max_order, *seed);
            if !report.passed() {
                code = ExitCode::from(1);
            }
            match cli.format {
                Format::Pretty => render_verify(&report),
                Format::Json => json(&report)?,
                Format::Csv => bail!("verify has no CSV form; use pretty or json"),
            }
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Each factor coefficient next to its factorial-scaled form, the shape
/// the values are usually cited in.
fn render_decomposition(d: &Decomposition) -> String {
    if d.is_empty() {
        return "no factors below the truncation order\n".to_string();
    }
    let mut factorial = Rational::one();
    let mut rows = Vec::new();
    for j in 1..=d.len() {
        factorial *= &Rational::from_int(j as i64);
        rows.push((
            j.to_string(),
            d.coefficient(j).to_string(),
            (&factorial * d.coefficient(j)).to_string(),
        ));
    }
    let j_width = rows.iter().map(|r| r.0.len()).max().unwrap();
    let b_width = rows.iter().map(|r| r.1.len()).max().unwrap().max(3);
    let mut out = format!("{:>j_width$}  {:<b_width$}  j! b_j\n", "j", "b_j");
    for (j, b, scaled) in &rows {
        out.push_str(&format!("{j:>j_width$}  {b:<b_width$}  {scaled}\n"));
    }
    out
}

fn render_sum_form(s: &SumForm) -> String {
    if s.is_empty() {
        return "no terms below the truncation order\n".to_string();
    }
    let mut out = String::new();
    for j in 1..=s.len() {
        out.push_str(&format!("A_{j} = {}\n", s.coefficient(j)));
    }
    out
}

fn render_cbh(report: &CbhReport) -> String {
    let verdict = |ok: bool| if ok { "ok" } else { "mismatch" };
    let mut out = format!(
        "order {}\nproduct form: {}\nsum form: {}\n",
        report.order,
        verdict(report.product_matches),
        verdict(report.sum_matches),
    );
    if let Some(degree) = report.first_mismatch {
        out.push_str(&format!("first mismatch at degree {degree}\n"));
    }
    out
}

fn render_qtable(table: &QTable, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Pretty => format!("{table}\n"),
        Format::Json => json(table)?,
        Format::Csv => table.to_csv(),
    })
}

fn render_residues(table: &ResidueTable) -> String {
    let mut out = String::from("   m    n  residue\n");
    for row in &table.rows {
        out.push_str(&format!("{:>4} {:>4}  {}\n", row.m, row.n, row.residue));
    }
    out
}

fn render_commutator(table: &CoefficientTable) -> String {
    let mut out = format!("w = {}, n = {}\n   j    k  value\n", table.w, table.n);
    for row in &table.rows {
        out.push_str(&format!("{:>4} {:>4}  {}\n", row.j, row.k, row.value));
    }
    out
}

fn render_verify(report: &VerifyReport) -> String {
    format!("{report}\n")
}
