//! End-to-end tests of the command line binary: exit codes, byte-stable
//! output, and round-trips of every emitted format back through the
//! library parsers.
//!
//! Exit code 1 (a failed consistency check) has no natural trigger: the
//! identities the binary checks actually hold, so only codes 0 and 2 can
//! be observed here.

use std::process::{Command, Output};

use expseries::bernoulli::QTable;
use expseries::changevar::{decompose, exponential_change};
use expseries::jacobi::{CoefficientTable, ResidueTable};
use expseries::Rational;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expseries"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("output is UTF-8")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("no signal")
}

#[test]
fn exit_codes_separate_success_from_usage_errors() {
    assert_eq!(exit_code(&["decompose", "--order", "4"]), 0);
    assert_eq!(
        exit_code(&["verify", "--suite", "series", "--max-order", "4"]),
        0
    );
    assert_eq!(exit_code(&["decompose", "--no-such-flag"]), 2);
    assert_eq!(exit_code(&["cbh", "--format", "csv"]), 2);
    assert_eq!(exit_code(&["residues", "--m", "5..2"]), 2);
    assert_eq!(exit_code(&["qtable", "--m", "1", "--n", "2", "--top", "-5"]), 2);
    assert_eq!(exit_code(&["decompose", "--func", "custom"]), 2);
}

#[test]
fn decompose_output_matches_the_library() {
    let text = stdout_of(&["decompose", "--order", "8"]);
    let expected = "\
j  b_j      j! b_j
1  1/2      1/2
2  -1/12    -1/6
3  0        0
4  -1/480   -1/20
5  0        0
6  1/12096  5/84
7  0        0
";
    assert_eq!(text, expected);

    let d = decompose(&exponential_change(&Rational::one(), 8)).unwrap();
    let mut factorial = Rational::one();
    for j in 1..=d.len() {
        factorial *= &Rational::from_int(j as i64);
        let scaled = (&factorial * d.coefficient(j)).to_string();
        let row = text.lines().nth(j).unwrap();
        assert!(
            row.ends_with(&scaled),
            "row {j} should end with the scaled value {scaled}: {row:?}"
        );
    }

    let long = stdout_of(&["decompose", "--order", "15"]);
    for cited in ["-7/24", "35/22", "-4279/312", "3003/16"] {
        assert!(long.contains(cited), "order 15 table should cite {cited}");
    }
}

#[test]
fn qtable_json_round_trips_byte_for_byte() {
    let text = stdout_of(&["qtable", "--m", "2", "--n", "3", "--top", "4", "--format", "json"]);
    let table: QTable = serde_json::from_str(&text).unwrap();
    let reemitted = serde_json::to_string_pretty(&table).unwrap() + "\n";
    assert_eq!(text, reemitted);
}

#[test]
fn qtable_csv_round_trips_byte_for_byte() {
    let text = stdout_of(&["qtable", "--m", "2", "--n", "3", "--top", "4", "--format", "csv"]);
    let table = QTable::from_csv(&text).unwrap();
    assert_eq!(text, table.to_csv());
}

#[test]
fn qrecur_agrees_with_direct_expansion() {
    let recursive = stdout_of(&["qrecur", "--n", "3", "--jmax", "10", "--format", "csv"]);
    let direct = stdout_of(&["qtable", "--m", "1", "--n", "3", "--top", "7", "--format", "csv"]);
    assert_eq!(recursive, direct);
}

#[test]
fn residues_csv_round_trips_byte_for_byte() {
    let text = stdout_of(&["residues", "--m", "-4..4", "--n", "1..4", "--format", "csv"]);
    let table = ResidueTable::from_csv(&text).unwrap();
    assert_eq!(text, table.to_csv());
    assert_eq!(table.rows.len(), 9 * 4);
}

#[test]
fn commutator_csv_round_trips_byte_for_byte() {
    let text = stdout_of(&[
        "commutator", "--w", "2", "--n", "1", "--j", "-3..3", "--format", "csv",
    ]);
    let table = CoefficientTable::from_csv(&text).unwrap();
    assert_eq!(text, table.to_csv());
    assert_eq!(table.rows.len(), 7 * 9);
}

#[test]
fn verify_output_is_deterministic() {
    let args = [
        "verify", "--suite", "changevar", "--max-order", "6", "--seed", "9",
    ];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    let json_args = [
        "verify", "--suite", "series", "--max-order", "5", "--seed", "3", "--format", "json",
    ];
    let first = stdout_of(&json_args);
    assert_eq!(first, stdout_of(&json_args));
    let value: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(value["checks"].as_array().is_some_and(|c| c.len() == 5));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let args = ["qtable", "--m", "1", "--n", "2", "--top", "6", "--format", "csv"];
    let streamed = stdout_of(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap();
    with_out.extend(["--out", path_str]);
    let out = run(&with_out);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), streamed);
}
