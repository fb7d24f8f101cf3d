use std::process::{Command, Output};

use instcone::knot::{by_name, save};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_instcone")).args(args).env_remove("INSTCONE_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn invariants_json() {
    let o = run(&["invariants", "catalog:trefoil-neg", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"tau": -1, "nu": 0, "nu_sharp": -1, "r0": 1}));
}

#[test]
fn invariants_with_tau_zero_leave_nu_sharp_null() {
    let o = run(&["invariants", "catalog:box", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nu"], 1);
    assert!(v["nu_sharp"].is_null() && v["r0"].is_null());
}

#[test]
fn surgery_range_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trefoil-neg.json");
    save(&by_name("trefoil-neg").unwrap(), &path).unwrap();
    let o = run(&["surgery", path.to_str().unwrap(), "--range", "-3..3", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "slope,grading,dim\n-3,,3\n-2,,2\n-1,,1\n0,0,2\n1,,3\n2,,4\n3,,5\n");
}

#[test]
fn single_negative_slope() {
    let o = run(&["surgery", "catalog:unknot", "--slope", "-5"]);
    assert_eq!(stdout(&o), "slope  dim\n-5     5\n");
}

#[test]
fn zero_surgery_indeterminate() {
    let o = run(&["zero", "catalog:box", "--csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "grading,dim\n0,indeterminate\n");
    let o = run(&["surgery", "catalog:box", "--slope", "0", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["gradings"][0]["dim"], "indeterminate");
}

#[test]
fn dual_grading_accepts_halves() {
    let o = run(&["dual", "catalog:trefoil-neg", "--m", "7", "--grading", "0"]);
    assert_eq!(stdout(&o), "grading  dim\n0        1\n");
    let o = run(&["dual", "catalog:trefoil-neg", "--m", "7", "--grading", "1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["dual", "catalog:unknot", "--m", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn check_marks_s0_skipped() {
    let o = run(&["check", "catalog:box"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("zero-surgery-s0")).unwrap();
    assert!(line.starts_with("skipped"), "{line}");
}

#[test]
fn check_is_deterministic_and_seed_env_is_read() {
    let a = run(&["check", "catalog:trefoil-neg", "--json", "--seed", "9"]);
    let b = Command::new(env!("CARGO_BIN_EXE_instcone"))
        .args(["check", "catalog:trefoil-neg", "--json"])
        .env("INSTCONE_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["seed"] == 9));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", "/no/such/file.json"]).status.code(), Some(3));
    assert_eq!(run(&["table", "catalog:nope"]).status.code(), Some(3));
    assert_eq!(run(&["surgery", "catalog:unknot"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);

    // d₊ lowering the grading is a validation failure.
    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"name":"x","genus":1,"generators":[{"id":"a","alex2":2,"z2":0},{"id":"b","alex2":0,"z2":1},{"id":"c","alex2":0,"z2":0}],
            "d_plus":[{"from":"a","to":"b","coeff":"1"}]}"#,
    )
    .unwrap();
    let o = run(&["validate", invalid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert_eq!(run(&["invariants", invalid.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn table_lists_large_surgery_dims() {
    let o = run(&["table", "catalog:trefoil-neg", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("s,dim\n"));
    assert_eq!(text.lines().count(), 4);
}
