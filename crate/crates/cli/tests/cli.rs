use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use interdict_cli::SolveReport;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interdict")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_worked_example() {
    let ex = fixture("worked_example.json");
    let out = run(&["solve", "--instance", ex.to_str().unwrap(), "--model", "ip5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("objective 7"), "{text}");
    assert!(text.contains("items {1,4}") || text.contains("items {2,3}"), "{text}");
}

#[test]
fn solve_json_round_trips() {
    let ex = fixture("worked_example.json");
    for model in ["ip1", "ip2", "ip3", "ip4", "ip5", "dp", "enum"] {
        let out = run(&["solve", "--instance", ex.to_str().unwrap(), "--model", model, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{model}");
        let report: SolveReport = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report.model, model);
        assert_eq!(report.status, "optimal");
        assert_eq!(report.objective, Some(7.0));
        let again: SolveReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(again, report);
    }
}

#[test]
fn phi_on_bitstring() {
    let ex = fixture("worked_example.json");
    let out = run(&["phi", "--instance", ex.to_str().unwrap(), "--x", "1110"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("2"));
    assert!(text.contains("{1,3}"));
    let bad = run(&["phi", "--instance", ex.to_str().unwrap(), "--x", "11"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn ip1_needs_p_one() {
    let inst = fixture("p5_example.json");
    let out = run(&["solve", "--instance", inst.to_str().unwrap(), "--model", "ip1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p = 1"), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn infeasible_solve_exits_one() {
    let inst = fixture("p5_example.json");
    let out = run(&["solve", "--instance", inst.to_str().unwrap(), "--model", "ip5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("status infeasible"));
}

#[test]
fn oracle_agrees_on_worked_example() {
    let ex = fixture("worked_example.json");
    let out = run(&["oracle", "--instance", ex.to_str().unwrap(), "--expect", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("agree"));
}

#[test]
fn corrupted_fixture_raises_alarm() {
    let ex = fixture("worked_example.json");
    let wrong = std::fs::read_to_string(fixture("worked_example.wrong_optimum")).unwrap();
    let out = run(&["oracle", "--instance", ex.to_str().unwrap(), "--expect", wrong.trim()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("disagreement"));
}

#[test]
fn broken_instance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"n":2,"p":1,"costs":[1],"weights":[1,1],"budget":1}"#).unwrap();
    let out = run(&["solve", "--instance", path.to_str().unwrap(), "--model", "dp"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(run(&["solve", "--model", "dp"]).status.code() == Some(2));
    assert!(run(&["frobnicate"]).status.code() == Some(2));
}

#[test]
fn enumeration_capacity_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--generator", "gen1", "--n", "30", "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let path = stdout(&out).trim().to_string();
    let out = run(&["solve", "--instance", &path, "--model", "enum"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_writes_named_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["gen", "--generator", "gen2", "--n", "9", "--p", "2", "--seed", "4", "--count", "3", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    for s in 4..7 {
        assert!(dir.path().join(format!("gen2_n9_p2_s{s}.json")).exists());
    }
    let bad = run(&["gen", "--generator", "gen1", "--n", "3", "--out", d]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn export_both_formats() {
    let ex = fixture("worked_example.json");
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("m.lp");
    let out = run(&["export", "--instance", ex.to_str().unwrap(), "--model", "ip1", "--format", "lp", "--out", lp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&lp).unwrap().contains("c1: 3 x1 + 7 x2 + 4 x3 + 10 x4 >= 11"));
    let mps = dir.path().join("m.mps");
    let out = run(&["export", "--instance", ex.to_str().unwrap(), "--model", "ip5", "--format", "mps", "--out", mps.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&mps).unwrap().contains("ENDATA"));
}

#[test]
fn bench_and_profile_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let lb = dir.path().join("lb.json");
    std::fs::write(&lb, r#"{"generator":"gen1","n":6,"p":1,"count":5,"models":["ip1","ip5"]}"#).unwrap();
    let out = run(&["bench-lb", "--manifest", lb.to_str().unwrap(), "--out", dir.path().join("lb").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("lb/dominance.csv").exists());

    let tm = dir.path().join("time.json");
    std::fs::write(
        &tm,
        r#"{"batches":[{"generator":"gen2","n":6,"p":1,"seed":0,"count":2}],"models":["ip3","ip5"],"time_limit":30,"oracle_max_n":10}"#,
    )
    .unwrap();
    let tdir = dir.path().join("t");
    let out = run(&["bench-time", "--manifest", tm.to_str().unwrap(), "--out", tdir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let profile = std::fs::read_to_string(tdir.join("profile.csv")).unwrap();
    assert!(profile.starts_with("model,tau,k_s\n"));
    assert_eq!(profile.lines().count(), 1 + 2 * 200);

    let again = dir.path().join("p.csv");
    let out = run(&["profile", "--records", tdir.join("results.csv").to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(again).unwrap(), profile);

    std::fs::write(&tm, r#"{"batches":[],"models":["ip5"],"time_limit":1,"colour":"red"}"#).unwrap();
    let out = run(&["bench-time", "--manifest", tm.to_str().unwrap(), "--out", tdir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
