use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EIGHT_POINT: &str = "polytope 3 8\n0 0 0\n0 0 1\n0 1 2\n0 1 3\n1 1 1\n1 1 2\n1 0 3\n1 0 4\n";
const RECTANGLE: &str = "polytope 2 4\n0 0\n4 0\n0 2\n4 2\n";
const P2_FAN: &str = "fan 2 3 3\n1 0\n0 1\n-1 -1\n0 1\n1 2\n0 2\n";

fn toriscope(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toriscope"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

#[test]
fn support_writes_minimal_polytopes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p2.fan"), P2_FAN).unwrap();
    let out = toriscope(&["support", "p2.fan", "--out", "sup"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "projective");
    assert_eq!(v["minimality"], "inclusion-minimal");
    let text = fs::read_to_string(dir.path().join("sup/polytope-0.txt")).unwrap();
    assert_eq!(text, "polytope 2 3\n0 0\n0 1\n1 0\n");
}

#[test]
fn extreme_ray_mode_makes_no_minimality_claim() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p2.fan"), P2_FAN).unwrap();
    let out = toriscope(&["support", "p2.fan", "--mode", "extreme_rays"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["minimality"], "no minimality guarantee");
}

#[test]
fn gen_fan_output_round_trips_through_support() {
    let dir = tempfile::tempdir().unwrap();
    let out = toriscope(&["gen-fan", "--seed", "3", "--dim", "2", "--out", "f.fan"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("f.fan")).unwrap();
    assert!(text.starts_with("fan 2 "));
    let out = toriscope(&["support", "f.fan"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "projective");
}

#[test]
fn exceeded_caps_exit_3_with_json_reason() {
    let dir = tempfile::tempdir().unwrap();
    let out = toriscope(
        &["gen-fan", "--dim", "3", "--coord-bound", "3", "--max-extra-rays", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["kind"], "error");
    assert_eq!(err["stage"], "desingularize");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "garbage\n").unwrap();
    let out = toriscope(&["analyze", "bad.txt"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn whitelisted_fixture_is_known_unless_disabled() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e8.txt"), EIGHT_POINT).unwrap();
    let out = toriscope(&["analyze", "e8.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "KNOWN");
    let out = toriscope(&["analyze", "e8.txt", "--no-whitelist"], dir.path());
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(json(&out)["status"], "DISCOVERY");
}

#[test]
fn chisel_at_a_vertex_cuts_off_a_unit_triangle() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("r.txt"), RECTANGLE).unwrap();
    let out = toriscope(&["chisel", "r.txt", "--face", "0,0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["splits"], true);
    assert_eq!(v["pieces"][1], "polytope 2 3\n0 0\n0 1\n1 0\n");
}

#[test]
fn injected_fixture_halts_search_and_is_logged() {
    let dir = tempfile::tempdir().unwrap();
    let out = toriscope(
        &[
            "search",
            "--dim",
            "3",
            "--inject",
            "eight-point",
            "--discovery-dir",
            "disc",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(10));
    let lines = json_lines(&out);
    assert_eq!(lines[0]["status"], "DISCOVERY");
    assert_eq!(lines.last().unwrap()["stopped"], "discovery");
    let log = fs::read_to_string(dir.path().join("disc/discoveries.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 1);
}

#[test]
fn exhausted_time_budget_exits_3_with_resume_token() {
    let dir = tempfile::tempdir().unwrap();
    let out = toriscope(
        &[
            "search",
            "--dim",
            "3",
            "--seed",
            "9",
            "--max-seconds",
            "0",
            "--discovery-dir",
            "disc",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let summary = json_lines(&out).pop().unwrap();
    assert_eq!(summary["stopped"], "caps");
    assert_eq!(summary["resume"]["seed"], 9);
}

#[test]
fn short_search_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "search",
        "--dim",
        "2",
        "--seed",
        "5",
        "--iterations",
        "3",
        "--discovery-dir",
        "disc",
    ];
    let a = toriscope(&args, dir.path());
    let b = toriscope(&args, dir.path());
    assert!(matches!(a.status.code(), Some(0) | Some(10)));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
