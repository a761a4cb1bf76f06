use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn supplycheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supplycheck")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SWAPPED: &str = r#"{"dimension": 2, "scalar": "rational", "observations": [
  {"price": ["2", "1"], "plans": [["0", "1"]]},
  {"price": ["1", "2"], "plans": [["1", "0"]]}
]}"#;

const STRICT: &str = r#"{"dimension": 2, "scalar": "rational", "observations": [
  {"price": ["2", "1"], "plans": [["1", "0"]]},
  {"price": ["1", "2"], "plans": [["0", "1"]]}
]}"#;

#[test]
fn demo_figure1_reports_the_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("demo.json");
    let out = supplycheck(&["demo", "figure1", "--s", "endpoints+midpoint", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("PASS law_of_supply"));
    assert!(text.contains("PASS homogeneity"));
    assert!(text.contains("PASS weak_rationalization"));
    assert!(text.contains("FAIL strong_rationalization"));
    assert!(text.contains("z* = (1/4, 3/4) at p* = (1, 1)"));

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let w = &doc["extension_witness"];
    assert_eq!(w["plan"], serde_json::json!(["1/4", "3/4"]));
    assert_eq!(w["attains_support"], Value::Bool(true));
    assert_eq!(w["monotone_consistent"], Value::Bool(true));
    assert_eq!(w["kind"], "structural");
}

#[test]
fn demo_accepts_an_s_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", r#"["0/1", "x"]"#);
    assert_eq!(supplycheck(&["demo", "figure1", "--s", &s]).status.code(), Some(2));
    let s = write(dir.path(), "s.json", r#"[["1", "0"], ["0", "1"], ["1/3", "2/3"]]"#);
    let out = supplycheck(&["demo", "figure1", "--s", &s]);
    assert_eq!(out.status.code(), Some(1));
    // the new mixture (1/2)(1,0) + (1/2)(0,1) is the first one outside S
    assert!(stdout(&out).contains("z* = (1/2, 1/2)"));
}

#[test]
fn check_swapped_plans_fails_with_value_minus_two() {
    let dir = tempfile::tempdir().unwrap();
    let ds = write(dir.path(), "ds.json", SWAPPED);
    let report = dir.path().join("r.json");
    let out = supplycheck(&["check", &ds, "--checks", "los", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL law_of_supply"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["reports"][0]["witnesses"][0]["value"], "-2");
}

#[test]
fn check_strict_dataset_passes() {
    let dir = tempfile::tempdir().unwrap();
    let ds = write(dir.path(), "ds.json", STRICT);
    let out = supplycheck(&["check", &ds, "--max-cycle-len", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS ")).count(), 5);
}

#[test]
fn generated_polytope_corpus_checks_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let y = write(
        dir.path(),
        "y.json",
        r#"{"dimension": 3, "scalar": "rational", "generators": [["0","0","0"], ["2","0","1"], ["0","2","1"], ["1","1","1"], ["-1","3","0"]]}"#,
    );
    let ds = dir.path().join("ds.json");
    let ds = ds.to_str().unwrap();
    let oracle = format!("polytope:{y}");
    let out = supplycheck(&["generate", "--oracle", &oracle, "--prices", "sphere:20", "--dup", "2,1/3", "--ties", "5", "--seed", "7", "--out", ds]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(supplycheck(&["check", ds]).status.code(), Some(0));
    assert_eq!(supplycheck(&["verify", ds, "--polytope", &y, "--mode", "strong"]).status.code(), Some(0));
    let hull = dir.path().join("hull.json");
    let out = supplycheck(&["rationalize", ds, "--out", hull.to_str().unwrap(), "--verify", "weak"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(hull.exists());
}

#[test]
fn generate_is_reproducible_and_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = supplycheck(&["generate", "--oracle", "rotation:90", "--prices", "grid:1", "--seed", "3", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = supplycheck(&["generate", "--oracle", "rotation:90", "--prices", "grid:1", "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rotation_dataset_fails_cyclic_monotonicity() {
    let dir = tempfile::tempdir().unwrap();
    let prices = write(dir.path(), "p.json", r#"[["1","0"], ["0","1"], ["-1","0"]]"#);
    let ds = dir.path().join("ds.json");
    let ds = ds.to_str().unwrap();
    let prices = format!("file:{prices}");
    assert_eq!(supplycheck(&["generate", "--oracle", "rotation:90", "--prices", &prices, "--seed", "0", "--out", ds]).status.code(), Some(0));
    let out = supplycheck(&["check", ds, "--checks", "los,cyclic"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("PASS law_of_supply"));
    assert!(text.contains("FAIL cyclic_monotonicity") && text.contains("weight -2"));
}

#[test]
fn perturb_requires_float_and_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let exact = write(dir.path(), "e.json", STRICT);
    let out = dir.path().join("n.json");
    assert_eq!(supplycheck(&["perturb", &exact, "--noise", "0.1", "--seed", "1", "--out", out.to_str().unwrap()]).status.code(), Some(2));
    let float = write(
        dir.path(),
        "f.json",
        r#"{"dimension": 2, "scalar": "float", "tolerance": 1e-9, "observations": [{"price": [2, 1], "plans": [[1, 0]]}]}"#,
    );
    assert_eq!(supplycheck(&["perturb", &float, "--noise", "0.1", "--seed", "1", "--out", out.to_str().unwrap()]).status.code(), Some(0));
    assert!(out.exists());
}

#[test]
fn jacobian_exit_codes() {
    assert_eq!(supplycheck(&["jacobian", "--oracle", "ball:1", "--at", "1,0"]).status.code(), Some(0));
    let out = supplycheck(&["jacobian", "--oracle", "rotation:90", "--at", "-1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL symmetry"));
    assert_eq!(supplycheck(&["jacobian", "--oracle", "ball:1", "--at", "0,0"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(supplycheck(&["check"]).status.code(), Some(2));
    assert_eq!(supplycheck(&["check", "x.json", "--checks", "nope"]).status.code(), Some(2));
    assert_eq!(supplycheck(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{");
    assert_eq!(supplycheck(&["check", &bad]).status.code(), Some(2));
    let y = write(dir.path(), "y.json", r#"{"dimension": 3, "scalar": "rational", "generators": [["0","0","0"]]}"#);
    let ds = write(dir.path(), "ds.json", STRICT);
    assert_eq!(supplycheck(&["verify", &ds, "--polytope", &y, "--mode", "weak"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let ds = write(dir.path(), "ds.json", SWAPPED);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        supplycheck(&["check", &ds, "--report", p.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
