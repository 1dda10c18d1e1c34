use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semigrowth"));
    cmd.env_remove("SEMIGROWTH_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.json"))
}

fn assert_valid(name: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap_or_else(|e| panic!("{name}: {e}"));
    if let Err(errors) = compiled.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} output violates its schema: {msgs:#?}");
    };
}

#[test]
fn phi_csv_has_phi_of_four() {
    let out = run(&["phi", "--family", "exf1", "--levels", "6", "--nmax", "1024", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,phi,interval\n"));
    assert!(text.lines().any(|l| l == "4,3,1"), "{}", &text[..200]);
    assert_eq!(text.lines().count(), 1025);
    assert!(!text.contains('\r') && !text.lines().any(|l| l.ends_with(',')));
}

#[test]
fn criterion_mutant_exits_one_with_gap_failure() {
    let (v, code) = json(&["criterion", "--values", "1,3/2,7/4"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert_eq!(v["failures"][0]["level"], 1);
    assert_eq!(v["failures"][0]["condition"], "gap");
    let out = run(&["criterion", "--values", "1,3/2,7/4"]);
    let detail: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(detail["status"], "fail");
}

#[test]
fn criterion_family_passes() {
    let (v, code) = json(&["criterion", "--family", "quadratic", "--levels", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["levels"].as_array().unwrap().len(), 6);
    assert_eq!(v["levels"][5]["gap"], "not_checkable");
}

#[test]
fn realize_cusp() {
    let (v, code) = json(&["realize", "--generators", "1,3/2"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({"alpha": "1/2", "exponents": [2, 3]}));
}

#[test]
fn lattice_count_prints_exact_count() {
    let out = run(&["lattice-count", "--weights", "1,9/2", "--alpha", "0", "--n", "10"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "38\n");
    let out = run(&["lattice-count", "--weights", "1,9/2", "--sweep", "10:30:10"]);
    let text = stdout(&out);
    assert!(text.starts_with("n,count,ratio\n10,38,19/50\n"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["phi", "--values", "1,1.5", "--nmax", "4"],
        vec!["phi", "--nmax", "4"],
        vec!["phi", "--values", "1,2", "--family", "exf1", "--nmax", "4"],
        vec!["criterion", "--family", "exf1"],
        vec!["enumerate", "--values", "1,3/2", "--bound", "0.5"],
        vec!["examples", "--family", "power:3,2", "--nmax", "10"],
        vec!["examples", "--family", "exf1", "--levels", "2", "--nmax", "1024"],
        vec!["realize", "--generators", "1,3/2", "--format", "csv"],
        vec!["lattice-count", "--weights", "1,9/2", "--sweep", "10:x"],
        vec!["nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn failed_bounds_exit_one() {
    let (v, code) = json(&["corn1", "--family", "quadratic", "--levels", "10", "--start", "16", "--nmax", "512"]);
    assert_eq!(code, 1);
    assert_eq!(v["check"]["first_violation"], 16);
    let (v, code) = json(&["psi", "--family", "exf1", "--start", "64", "--nmax", "256", "--min-ratio", "1/2"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn every_subcommand_matches_its_schema() {
    let cases: Vec<(&str, Vec<&str>, i32)> = vec![
        ("enumerate", vec!["enumerate", "--values", "1,5/2", "--bound", "6"], 0),
        ("phi", vec!["phi", "--values", "1,9/2", "--nmax", "30"], 0),
        ("criterion", vec!["criterion", "--values", "1,5/2,7/2,27/4"], 0),
        ("criterion", vec!["criterion", "--values", "1,5/2,9/4"], 1),
        ("bounds", vec!["bounds", "--family", "exf1", "--nmax", "64", "--d", "2"], 0),
        ("examples", vec!["examples", "--family", "quadratic", "--nmax", "128"], 0),
        ("corn1", vec!["corn1", "--family", "exf1", "--start", "4", "--nmax", "256"], 0),
        ("psi", vec!["psi", "--family", "exf1", "--start", "64", "--nmax", "128", "--min-ratio", "61/180"], 0),
        ("lattice-count", vec!["lattice-count", "--weights", "1,9/2", "--n", "10"], 0),
        ("lattice-count", vec!["lattice-count", "--weights", "1,9/2", "--simplex", "--n", "20"], 0),
        ("lattice-count", vec!["lattice-count", "--weights", "1,9/2", "--sweep", "10:40:10"], 0),
        ("realize", vec!["realize", "--generators", "2,3/2,7/3"], 0),
        ("counterexample", vec!["counterexample", "--levels", "3"], 0),
        ("fit", vec!["fit", "--family", "exf1", "--nmax", "1024"], 0),
    ];
    for (schema, args, expected) in cases {
        let (v, code) = json(&args);
        assert_eq!(code, expected, "{args:?}");
        assert_valid(schema, &v);
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["examples", "--family", "nlog", "--nmax", "2000", "--format", "json"];
    let a = bin().args(args).args(["--threads", "1"]).output().unwrap();
    let b = bin().args(args).output().unwrap();
    let c = bin().args(args).arg("--sequential").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn json_keys_are_sorted() {
    let out = run(&["bounds", "--values", "1,3/2", "--nmax", "10", "--format", "json"]);
    let text = stdout(&out);
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && l.contains("\":"))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("SEMIGROWTH_OUT_DIR", dir.path())
        .args(["realize", "--generators", "1,3/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("realize.json")).unwrap();
    assert!(written.contains("\"1/2\""));

    let explicit = dir.path().join("nested/table.csv");
    let out = run(&["phi", "--values", "1,3/2", "--nmax", "5", "--output", explicit.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(explicit).unwrap(), "n,phi,interval\n1,0,0\n2,2,2\n3,4,2\n4,6,2\n5,8,2\n");
}

#[test]
fn schemas_reject_malformed_reports() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path("realize")).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    assert!(compiled.is_valid(&serde_json::json!({"alpha": "1/2", "exponents": [2, 3]})));
    assert!(!compiled.is_valid(&serde_json::json!({"alpha": "0.5", "exponents": [2, 3]})));
    assert!(!compiled.is_valid(&serde_json::json!({"alpha": "1/2"})));
    assert!(!compiled.is_valid(&serde_json::json!({"alpha": "1/2", "exponents": [2], "extra": 1})));
}
