use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bootstrap3d"))
        .args(args)
        .output()
        .unwrap()
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--machine"];
    full.extend_from_slice(args);
    let out = run(&full);
    let record = serde_json::from_slice(&out.stdout).unwrap();
    (out.status.code().unwrap(), record)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const DIAMOND: &str = "X.X\n.X.\nX.X\n";

#[test]
fn bound_reports_exact_value() {
    let (code, r) = machine(&["bound", "4", "6", "9"]);
    assert_eq!(code, 0);
    assert_eq!(r["exact"], "38");
    assert_eq!(r["perfect_possible"], true);
    let (_, r) = machine(&["bound", "2", "2", "3"]);
    assert_eq!(r["exact"], "16/3");
    assert_eq!(r["ceiling"], 6);
    assert_eq!(r["perfect_possible"], false);
}

#[test]
fn verify_classifies_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "diamond.txt", DIAMOND);
    let (code, r) = machine(&["verify", &good]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "perfect");
    assert_eq!(r["audit"]["exact_three"], true);

    let bad = write(dir.path(), "corner.txt", "X..\n...\n");
    let (code, r) = machine(&["verify", &bad]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "not-percolating");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.txt", "X..\n.Q.\n");
    let out = run(&["verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 2"), "{err}");

    let ragged = write(dir.path(), "ragged.txt", "X..\n.X\n");
    assert_eq!(run(&["simulate", &ragged]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "0", "3", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn simulate_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "diamond.txt", DIAMOND);
    let (code, r) = machine(&["simulate", &path]);
    assert_eq!(code, 0);
    assert_eq!(r["percolated"], true);
    assert_eq!(r["steps"], 1);

    let out = run(&["render", &path]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "X1X\n1X1\nX1X\n");

    // with r = 4 nothing spreads
    let (code, r) = machine(&["--r", "4", "simulate", &path]);
    assert_eq!(code, 1);
    assert_eq!(r["infected"], 5);
}

#[test]
fn build_writes_a_verifiable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.txt");
    let out = out.to_str().unwrap();
    let (code, r) = machine(&["build", "optimal", "7", "7", "11", "-o", out]);
    assert_eq!(code, 0);
    assert_eq!(r["size"], 68);
    let (code, r) = machine(&["verify", out]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "optimal");
    assert_eq!(r["size"], 68);

    let (code, r) = machine(&["build", "perfect", "4", "10", "13"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "perfect");

    // (2,3,4) has ab+ac+bc = 26, so no perfect set exists
    let out = run(&["build", "perfect", "2", "3", "4"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn combine_four_files() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.txt", DIAMOND);
    let (_, cube) = machine(&["build", "perfect", "3", "3", "3"]);
    let cube = write(dir.path(), "cube.txt", cube["seeds"].as_str().unwrap());
    let (code, r) = machine(&["combine", &sq, &cube, &cube, &sq]);
    assert_eq!(code, 0);
    assert_eq!(r["dims"], serde_json::json!([4, 6, 6]));
    assert_eq!(r["size"], 28);
    assert_eq!(r["status"], "perfect");
    assert!(r["provenance"].as_str().unwrap().starts_with("combined 1x3x3-perfect"));

    let (code, _) = machine(&["combine", &sq, &sq, &sq, &cube]);
    assert_ne!(code, 0);
}

#[test]
fn search_modes() {
    let (code, r) = machine(&["search", "exhaustive", "2", "3", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["min_size"], 8);
    assert_eq!(r["mode"], "exhaustive-proven");

    let (code, r) = machine(&["--rng-seed", "5", "search", "anneal", "3", "3", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["witness_size"], 9);

    let (code, _) = machine(&["search", "anneal", "3", "3", "3", "--target", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn anneal_can_save_into_a_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat.txt");
    let cat = cat.to_str().unwrap();
    let (code, _) = machine(&["--catalog", cat, "search", "anneal", "3", "3", "4", "--save"]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(cat).unwrap();
    assert!(text.contains("3 3 4"), "{text}");
    // the saved catalog feeds the builder
    let (code, r) = machine(&["--catalog", cat, "build", "optimal", "3", "3", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["size"], 11);
}

#[test]
fn family_commands() {
    let (code, r) = machine(&["family", "list"]);
    assert_eq!(code, 0);
    assert_eq!(r["families"].as_array().unwrap().len(), 7);

    let (code, r) = machine(&["family", "assemble", "2x8", "14"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "perfect");
    assert_eq!(r["size"], (16 + 28 + 112) / 3);

    assert_eq!(run(&["family", "assemble", "2x8", "15"]).status.code(), Some(2));
    assert_eq!(run(&["family", "assemble", "9x9", "15"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fam.txt");
    let out = out.to_str().unwrap();
    let (code, r) = machine(&["family", "discover", "4x4c1", "-o", out]);
    assert_eq!(code, 0);
    assert_eq!(r["found"], true);
    let (code, _) = machine(&["family", "assemble", "4x4c1", "19", "--families", out]);
    assert_eq!(code, 0);
}

#[test]
fn machine_output_is_deterministic() {
    let args = ["--machine", "--rng-seed", "11", "search", "anneal", "4", "4", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
