//! Binary-level checks: exit codes, the one-document-per-invocation
//! contract, reproducibility across runs and worker counts, and the word,
//! store and CSV file formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn testel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_testel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn testel_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_testel"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("testel-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn reduce_emits_one_document_with_the_config_header() {
    let out = testel(&["reduce", "--rank", "2", "--word", "x1 x1^-1 x2"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["tool"], "testel");
    assert_eq!(doc["command"], "reduce");
    assert_eq!(doc["config"]["rank"], 2);
    assert_eq!(doc["result"]["reduced"], "x2");
    assert_eq!(doc["result"]["length"], 1);
    // human summary goes to stderr only
    assert!(!output_str(&out.stdout).contains("reduced to"));
    assert!(output_str(&out.stderr).contains("reduced to"));
}

fn output_str(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn malformed_words_exit_with_code_two() {
    let out = testel(&["reduce", "--rank", "2", "--word", "y1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = testel(&["reduce", "--rank", "2", "--word", "x3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = testel(&[
        "net",
        "--free",
        "2",
        "--surface",
        "orientable:2",
        "--word",
        "x1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = testel(&["census", "--rank", "2", "--radius", "40"]);
    assert_eq!(out.status.code(), Some(2));
    let out = testel(&["bounds", "--name", "bogus", "--genus", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ball_counts_and_word_stream() {
    let dir = temp_dir("ball");
    let words_path = dir.join("ball.words");
    let out = testel(&[
        "ball",
        "--rank",
        "2",
        "--radius",
        "2",
        "--words",
        words_path.to_str().unwrap(),
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["ball_size"], "17");
    assert_eq!(doc["result"]["words_written"], 17);

    let listing = std::fs::read_to_string(&words_path).unwrap();
    let lines: Vec<&str> = listing.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[0], ""); // the identity is the empty word
    assert_eq!(lines[1], "x1");
    assert_eq!(lines[2], "x1^-1");
    assert_eq!(lines[5], "x1 x1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn net_identity_emits_the_canonical_square_word() {
    let out = testel(&["net", "--free", "2", "--word", "1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["output"], "x1 x1 x2 x2");
    assert_eq!(doc["result"]["distance"], 4);
    assert_eq!(doc["result"]["bound"], 4);
    assert_eq!(doc["result"]["trace"]["branch"], "canonical");
}

#[test]
fn endo_witness_reverifies_through_the_text_format() {
    let out = testel(&["endo", "--free", "2", "--word", "x1", "--bound", "1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["status"], "negative");
    let images = doc["result"]["witness_images"].as_array().unwrap();
    assert_eq!(images.len(), 2);
    assert_eq!(images[0], "x1");
    assert_eq!(images[1], "");
}

#[test]
fn census_documents_are_byte_identical_across_runs_and_workers() {
    let one = testel(&["census", "--rank", "2", "--radius", "3", "--workers", "1"]);
    let four = testel(&["census", "--rank", "2", "--radius", "3", "--workers", "4"]);
    let again = testel(&["census", "--rank", "2", "--radius", "3", "--workers", "1"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn census_store_reuses_and_exports_csv() {
    let dir = temp_dir("store");
    let csv_path = dir.join("records.csv");
    let args = ["census", "--rank", "2", "--radius", "2", "--vet-bound", "1"];
    let first = testel_env(&args, "TESTEL_OUT_DIR", dir.to_str().unwrap());
    assert!(first.status.success());
    assert!(dir.join("census.log").exists());

    let mut with_csv: Vec<&str> = args.to_vec();
    with_csv.extend(["--export-csv", csv_path.to_str().unwrap()]);
    let second = testel_env(&with_csv, "TESTEL_OUT_DIR", dir.to_str().unwrap());
    assert!(second.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "stored reuse must not change the document"
    );
    assert!(output_str(&second.stderr).contains("reusing stored record"));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("rank,k,L,positive,negative,unknown,ball_size,seed")
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("2,2,1,"));
    assert!(row.ends_with(",17,0"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bounds_reports_the_coset_and_net_constants() {
    let out = testel(&["bounds", "--name", "freeC", "--genus", "2"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["exact"]["numerator"], "1");
    assert_eq!(doc["result"]["exact"]["denominator"], "4025");

    let out = testel(&["bounds", "--name", "krss", "--genus", "2"]);
    let doc = stdout_json(&out);
    let decimal = doc["result"]["decimal"].as_str().unwrap();
    let value: f64 = decimal.parse().unwrap();
    assert!((value - 0.729810176954).abs() < 1e-9);
}

#[test]
fn verify_covering_reports_failures_without_erroring() {
    // a singleton cannot cover: reported, exit code stays 0
    let out = testel(&[
        "verify",
        "--check",
        "covering",
        "--set",
        "identity",
        "--rank",
        "2",
        "--radius",
        "2",
        "--translate",
        "1",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["covering_ok"], false);
    assert!(doc["result"]["first_uncovered"].is_string());
}

#[test]
fn coset_rejects_wrong_image_counts() {
    let out = testel(&[
        "coset",
        "--surface",
        "orientable:2",
        "--word",
        "x1",
        "--image",
        "(1 2)",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nonorientable_net_through_the_binary() {
    let out = testel(&["net", "--surface", "nonorientable:3", "--word", "x1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["bound"], 10);
    assert!(doc["result"]["distance"].as_u64().unwrap() <= 10);
}
