//! End-to-end command-line tests: exit codes, round trips, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn forge_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let path_str = path.to_str().unwrap();

    let out = run(&["forge", "--n", "1", "--out", path_str]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(path.exists());

    let out = run(&["verify", path_str, "--height", "500", "--places-bound", "100"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["point_search"]["found"], 1);
}

#[test]
fn forge_rejects_negative_n() {
    let out = run(&["forge", "--n", "-1"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn forge_rejects_rank_positive_seed() {
    let out = run(&["forge", "--n", "0", "--seed", "0,-6"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
}

#[test]
fn verify_missing_file_is_exit_2() {
    let out = run(&["verify", "/nonexistent/certificate.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_tampered_file_is_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let path_str = path.to_str().unwrap();
    let out = run(&["forge", "--n", "0", "--out", path_str]);
    assert_eq!(exit_code(&out), 0);

    // Replace c = 721 by the square 841 = 29^2: still odd-free at w? No:
    // the verifier must flag the odd-valuation/local-square conditions.
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"c\": \"721\""));
    std::fs::write(&path, text.replace("\"c\": \"721\"", "\"c\": \"841\"")).unwrap();

    let out = run(&["verify", path_str, "--height", "200", "--places-bound", "50"]);
    assert_eq!(exit_code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_garbage_file_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{\"schema\": 1, \"oops\": true}").unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn inspect_outputs_fields_and_rejects_bad_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let path_str = path.to_str().unwrap();
    run(&["forge", "--n", "0", "--out", path_str]);

    let out = run(&["inspect", path_str]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("target count n:  0"));
    assert!(text.contains("S = {2, 3, 5}"));
    assert!(text.contains("w = 7"));
    assert!(text.contains("c = 721"));

    let json = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, json.replace("\"schema\": 1", "\"schema\": 3")).unwrap();
    let out = run(&["inspect", path_str]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));
}

#[test]
fn inspect_without_file_is_exit_2() {
    let out = run(&["inspect"]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("usage"));
}

#[test]
fn forge_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    run(&["forge", "--n", "2", "--out", p1.to_str().unwrap()]);
    run(&["forge", "--n", "2", "--out", p2.to_str().unwrap()]);
    assert_eq!(read_bytes(&p1), read_bytes(&p2));
}

fn read_bytes(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}
