//! End-to-end tests of the fracfam binary: exit codes, output contracts,
//! and file round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracfam"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = tempdir().unwrap();
    let path: PathBuf = dir.path().join("fam.txt");
    let out = run(&[
        "construct", "--type", "all-s-subsets", "--n", "5", "--s", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "construct failed: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("L=0/1,1/2"));

    let out = run(&["verify", "--family", path.to_str().unwrap(), "--r", "3", "--l", "0/1,1/2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("valid"));
}

#[test]
fn construct_stdout_is_parseable_family() {
    let out = run(&["construct", "--type", "all-s-subsets", "--n", "4", "--s", "1"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    // the trailing L literal is a comment line, so the whole output parses
    let family = fracfam::Family::parse_str(&text).unwrap();
    assert_eq!(family.len(), 4);
    assert!(text.contains("# L=0/1"));
}

#[test]
fn verify_reports_invalid_with_witness_and_exit_1() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "n=4\n1,2\n3,4\n1,3\n").unwrap();
    let out = run(&["verify", "--family", path.to_str().unwrap(), "--r", "3", "--l", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("invalid"));
    assert!(text.contains("[0, 1, 2]"), "witness missing: {text}");
}

#[test]
fn duplicate_family_line_exits_2_with_line_number() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("dup.txt");
    std::fs::write(&path, "n=4\n1,2\n3\n1,2\n").unwrap();
    let out = run(&["verify", "--family", path.to_str().unwrap(), "--r", "3", "--l", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 4"), "missing line number: {err}");
    assert!(err.contains("first seen on line 2"), "missing first line: {err}");
}

#[test]
fn malformed_element_reports_line_and_col() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "n=5\n1,2\n2,x\n").unwrap();
    let out = run(&["verify", "--family", path.to_str().unwrap(), "--r", "3", "--l", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 3, col 3"), "missing position: {err}");
}

#[test]
fn fraction_parse_errors_propagate_verbatim() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("fam.txt");
    std::fs::write(&path, "n=4\n1,2\n").unwrap();
    let out = run(&["verify", "--family", path.to_str().unwrap(), "--r", "3", "--l", "2/4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("not irreducible"));
}

#[test]
fn bound_prints_improved_value() {
    let out = run(&["bound", "--n", "100", "--r", "3", "--s", "1"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("exact_improved = 4800"), "got: {text}");
    assert!(text.contains("exact_bound = 4848"));
}

#[test]
fn bound_json_has_stable_fields() {
    let out = run(&["bound", "--n", "100", "--r", "3", "--s", "1", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["exact_improved"], "4800");
    assert_eq!(value["improved_case"], true);
    assert_eq!(value["prime_selection"]["t"], 4);
    assert!(value["asymptotic_bound"].as_f64().unwrap() > 5554.0);
    assert!(value["pnt"]["t_estimate"].as_f64().is_some());
}

#[test]
fn bound_rejects_r_2_as_usage_error() {
    let out = run(&["bound", "--n", "10", "--r", "2", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("r >= 3"));
}

#[test]
fn certify_emits_json_and_exit_codes() {
    let dir = tempdir().unwrap();
    let family = dir.path().join("fam.txt");
    let report = dir.path().join("report.json");
    let out = run(&[
        "construct", "--type", "all-s-subsets", "--n", "5", "--s", "2",
        "--out", family.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "certify", "--family", family.to_str().unwrap(), "--r", "3", "--l", "0/1,1/2",
        "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["family_size"], 10);
    assert_eq!(value["dimension"], 16);
    assert_eq!(value["cells"][0]["group_count"], 10);
    assert_eq!(value["cells"][0]["triangularity"]["full_pass"], true);
    assert_eq!(value["cells"][0]["swallow"]["independent"], true);
    assert_eq!(value["overall"]["within_bound"], true);
    assert_eq!(value["skipped_primes"][0]["p"], 2);

    // invalid family refuses with exit 1
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "n=4\n1,2\n3,4\n1,3\n").unwrap();
    let out = run(&["certify", "--family", bad.to_str().unwrap(), "--r", "3", "--l", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_dim_cap_refuses() {
    let dir = tempdir().unwrap();
    let family = dir.path().join("fam.txt");
    run(&[
        "construct", "--type", "all-s-subsets", "--n", "5", "--s", "2",
        "--out", family.to_str().unwrap(),
    ]);
    let out = run(&[
        "certify", "--family", family.to_str().unwrap(), "--r", "3", "--l", "0/1,1/2",
        "--dim-cap", "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("exceeds the cap"));
}

#[test]
fn search_single_prints_witness_in_family_format() {
    let out = run(&["search", "--n", "3", "--r", "3", "--l", "1/2", "--seed", "9"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("max_size = 4"));
    assert!(text.contains("status = proven-optimal"));
    assert!(text.contains("seed=9"), "seed not echoed: {text}");
    let witness_part = text.split("witness:\n").nth(1).expect("witness section");
    let family = fracfam::Family::parse_str(witness_part).unwrap();
    assert_eq!(family.len(), 4);
}

#[test]
fn search_range_emits_csv_schema() {
    let out = run(&["search", "--n", "3..4", "--r", "3", "--l", "1/2", "--csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,max_size,status,exact_bound,ratio"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "3");
    assert_eq!(row[1], "4");
    assert_eq!(row[2], "proven-optimal");
    assert_eq!(row[3], "32");
    assert!(row[4].parse::<f64>().is_ok());
    assert_eq!(lines.next().unwrap().split(',').next(), Some("4"));
}

#[test]
fn search_naive_matches_bnb() {
    let naive = run(&["search", "--n", "4", "--r", "3", "--l", "1/3", "--naive"]);
    let bnb = run(&["search", "--n", "4", "--r", "3", "--l", "1/3"]);
    assert!(naive.status.success() && bnb.status.success());
    let pick = |s: &str| {
        s.lines()
            .find(|l| l.starts_with("max_size"))
            .map(str::to_owned)
            .unwrap()
    };
    assert_eq!(pick(&stdout_of(&naive)), pick(&stdout_of(&bnb)));
}

#[test]
fn sunflower_construct_works() {
    let out = run(&[
        "construct", "--type", "sunflower", "--n", "4", "--core", "1",
        "--petals", "3", "--petal-size", "1",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let family = fracfam::Family::parse_str(&stdout_of(&out)).unwrap();
    assert_eq!(family.len(), 3);
    assert_eq!(family.member(0).elements(), vec![1, 2]);
}

#[test]
fn canonical_file_round_trip_is_byte_identical() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("fam.txt");
    let out = run(&[
        "construct", "--type", "all-s-subsets", "--n", "6", "--s", "3",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let reparsed = fracfam::Family::parse_str(&text).unwrap();
    assert_eq!(reparsed.to_file_string(), text);
}
