use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descent-kit"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "machine"];
    full.extend_from_slice(args);
    let out = run(&full);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), json)
}

fn text(args: &[&str]) -> (i32, String) {
    let out = run(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn scratch_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("descent-kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_exit_codes_follow_the_verdict() {
    for (file, verdict, code) in [
        ("identity.toml", "Effective", 0),
        ("surjection.toml", "Effective", 0),
        ("non_surjection.toml", "NotAlmost", 5),
    ] {
        let path = spec(file);
        let path = path.to_str().unwrap();
        let (c, json) = machine(&["classify", path]);
        assert_eq!((c, json["verdict"].as_str().unwrap()), (code, verdict), "{file}");
        assert_eq!(json["exit_code"], code);
        // the text rendering carries the same verdict and code
        let (c, out) = text(&["classify", path]);
        assert_eq!(c, code);
        assert!(out.contains(&format!("verdict: {verdict}\n")), "{out}");
    }
}

#[test]
fn tampered_descent_maps_lower_the_class() {
    let path = spec("surjection.toml");
    let (c, json) = machine(&["classify", path.to_str().unwrap(), "--tamper", "unconstrained-descent-maps"]);
    assert_eq!(c, 4);
    assert_eq!(json["verdict"], "Almost");
    assert_eq!(json["witnesses"].as_array().unwrap().len(), 1);
}

#[test]
fn witnesses_parse_back() {
    let path = spec("non_surjection.toml");
    let (_, json) = machine(&["classify", path.to_str().unwrap()]);
    let witnesses = json["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 1);
    let body = witnesses[0]["toml"].as_str().unwrap();
    let file = scratch_file("witness.toml", body);
    let (c, back) = machine(&["validate", file.to_str().unwrap()]);
    assert_eq!(c, 0, "{back}");
    assert_eq!(back["verdict"], "valid");
    assert!(back["details"]["declared"].as_str().unwrap().starts_with("4 sets, 5 functions"));
}

#[test]
fn validate_reports_table_violations() {
    let (c, json) = machine(&["validate", spec("bad_table.toml").to_str().unwrap()]);
    assert_eq!(c, 2);
    assert_eq!(json["verdict"], "invalid");
    assert_eq!(json["details"]["structural_violations"], "3");
    let (c, json) = machine(&["validate", spec("arrow.toml").to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(json["details"]["coherence_failures"], "0");
}

#[test]
fn validate_flags_a_twisted_augmentation() {
    let path = spec("surjection.toml");
    let (c, json) = machine(&["validate", path.to_str().unwrap(), "--tamper", "inverted-theta"]);
    assert_eq!(c, 1);
    assert_eq!(json["verdict"], "incoherent");
}

#[test]
fn parse_errors_carry_a_line_and_exit_2() {
    let file = scratch_file("bad.toml", "[[set]]\nname = \"E\"\nsize = 2\nshape = \"round\"\n");
    let out = run(&["classify", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.toml:4"), "{err}");
    let out = run(&["classify", spec("bad_table.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "no task map");
}

#[test]
fn br_detects_a_broken_multiplication() {
    let path = spec("surjection.toml");
    let path = path.to_str().unwrap();
    let (c, json) = machine(&["br", path]);
    assert_eq!((c, json["verdict"].as_str().unwrap()), (0, "Equivalence"));
    let (c, json) = machine(&["br", path, "--bound", "3", "--tamper", "broken-mu"]);
    assert_eq!(c, 1);
    assert!(json["details"]["incident.0"].as_str().unwrap().contains("monad law"));
}

#[test]
fn harness_runs_are_reproducible() {
    let args = ["harness", "galois", "--seed", "7", "--samples", "12"];
    let (c1, a) = machine(&args);
    let (c2, b) = machine(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["cases"], b["cases"]);
    assert_eq!(a["cases"].as_array().unwrap().len(), 12);
}

#[test]
fn mutation_harness_detects_everything() {
    let (c, json) = machine(&["harness", "mutation"]);
    assert_eq!(c, 0, "{json}");
    assert_eq!(json["details"]["detected"], "6");
}

#[test]
fn unknown_harness_is_an_input_error() {
    assert_eq!(run(&["harness", "sheaves"]).status.code(), Some(2));
}
