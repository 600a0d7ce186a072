use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirac-algebroid"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dirac-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn scenario(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn list_documents_the_catalog() {
    let out = run(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let entries = v["groupoids"].as_array().unwrap();
    assert!(entries.len() >= 5);
    assert_eq!(entries[0]["name"], "translation");
    assert!(entries.iter().all(|e| e["parameters"].is_string()));
}

#[test]
fn axioms_pass_and_are_reproducible() {
    let dir = scratch("axioms");
    let s = scenario(
        &dir,
        "s.json",
        r#"{"groupoid": {"name": "translation"}, "instances": 30, "oracle_samples": 50}"#,
    );
    let s = s.to_str().unwrap();
    let a = run(&["axioms", "--scenario", s, "--seed", "42", "--jobs", "1"]);
    let b = run(&["axioms", "--scenario", s, "--seed", "42", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 42);
    assert!(v["laws"].as_array().unwrap().iter().all(|l| l["pass"] == true));
    let c = run(&["axioms", "--scenario", s, "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn unattainable_tolerance_fails_with_exit_one() {
    let dir = scratch("tight");
    let s = scenario(
        &dir,
        "s.json",
        r#"{"groupoid": {"name": "translation"}, "instances": 5, "tolerances": {"tol_axiom": 1e-30}}"#,
    );
    let out = run(&["axioms", "--scenario", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn invalid_scenarios_exit_two() {
    let dir = scratch("invalid");
    let cases = [
        r#"{"groupoid": {"name": "translation"}, "grids": {"n": []}}"#,
        r#"{"groupoid": {"name": "translation"}, "tolerances": {"tol_fd": 0}}"#,
        r#"{"groupoid": {"name": "klein-bottle"}}"#,
        r#"{"groupoid": "#,
    ];
    for (i, c) in cases.iter().enumerate() {
        let s = scenario(&dir, &format!("{i}.json"), c);
        let out = run(&["converge", "--scenario", s.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{c}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(
        run(&["axioms", "--scenario", dir.join("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["axioms", "--jobs", "0"]).status.code(), Some(2));
}

#[test]
fn converge_writes_tables_and_summary() {
    let dir = scratch("converge");
    let s = scenario(
        &dir,
        "s.json",
        r#"{"groupoid": {"name": "translation"}, "converge": {"comb_dims": [1], "comb_sides": [1.0], "mollify_sections": 3}}"#,
    );
    let out_dir = dir.join("out");
    let out = run(&[
        "converge",
        "--scenario",
        s.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("converge.json")).unwrap()).unwrap();
    assert_eq!(summary["schema"], 1);
    for sweep in summary["sweeps"].as_array().unwrap() {
        let csv = std::fs::read_to_string(out_dir.join(sweep["csv"].as_str().unwrap())).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("parameter,error,bound,satisfied"));
        assert!(lines.count() >= 2);
    }
    let comb = std::fs::read_to_string(out_dir.join("comb-k1-L1.csv")).unwrap();
    assert!(comb.lines().nth(1).unwrap().starts_with("4,"));
}

#[test]
fn reconstruct_and_dual_pass_on_rotations() {
    let dir = scratch("so2");
    let s = scenario(
        &dir,
        "s.json",
        r#"{"groupoid": {"name": "so2-plane"}, "samples": 100, "instances": 20}"#,
    );
    for cmd in ["reconstruct", "dual"] {
        let out = run(&[cmd, "--scenario", s.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let v = json(&out);
        assert_eq!(v["command"], cmd);
        assert_eq!(v["groupoid"], "so2-plane");
    }
}
