use std::path::PathBuf;
use std::process::{Command, Output};

fn tightframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightframe")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn derive_standard_formats() {
    let o = tightframe(&["derive-standard", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[2*alpha_00, 2*alpha_01, 2*beta_01"));

    let o = tightframe(&["derive-standard", "--k", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "tightframe/form-matrix/v1");
    assert_eq!(v["dim"], 15);

    let o = tightframe(&["derive-standard", "--k", "1", "--format", "latex"]);
    assert!(stdout(&o).starts_with("\\pmatrix{"));
}

#[test]
fn octonions_are_out_of_scope() {
    let o = tightframe(&["derive-standard", "--k", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("k = 8"));
    assert_eq!(tightframe(&["verify-proof", "--k", "8"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tightframe(&["derive-standard", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(tightframe(&["verify-proof", "--k", "4"]).status.code(), Some(2));
    assert_eq!(tightframe(&["hurwitz", "--k", "3"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_tightframe"))
        .args(["hurwitz"])
        .env("TIGHTFRAME_WORKERS", "none")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_proof_k2() {
    let o = tightframe(&["verify-proof"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict: match"));
    assert!(text.contains("span 17 vs 17"));

    let o = tightframe(&["verify-proof", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["matches"], true);
    assert_eq!(v["verdict"]["final_equations"]["generated"], 156);
}

#[test]
fn relation_fixtures() {
    let o = tightframe(&["verify-proof", "--relations", &fixture("final_list.txt")]);
    assert_eq!(o.status.code(), Some(0));

    let o = tightframe(&["verify-proof", "--relations", &fixture("corrupted_list.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not implied: omega_6_3 + omega_7_4 = 0"));

    let o = tightframe(&["verify-proof", "--relations", &fixture("printed_list.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: MISMATCH"));

    assert_eq!(tightframe(&["verify-proof", "--relations", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn long_running_k4_is_not_certified() {
    let o = tightframe(&["verify-proof", "--k", "4", "--long-running"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("not certified"));
    assert!(text.contains("0 residual"));
}

#[test]
fn tightness_survey() {
    let o = tightframe(&["tightness", "--k", "2", "--samples", "10", "--seed", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["perfect_runs"], 10);
    assert_eq!(v["span_dimension"], 8);
    let again = tightframe(&["tightness", "--k", "2", "--samples", "10", "--seed", "7", "--format", "json"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn hurwitz_all_k() {
    for k in ["1", "2", "4", "8"] {
        let o = tightframe(&["hurwitz", "--k", k]);
        assert_eq!(o.status.code(), Some(0), "k = {k}");
        assert!(stdout(&o).contains("holds"));
    }
}

#[test]
fn export_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    for (what, schema) in [
        ("standard", "tightframe/form-matrix/v1"),
        ("rules", "tightframe/equation-system/v1"),
        ("connection", "tightframe/connection-matrix/v1"),
    ] {
        let path = dir.path().join(format!("{what}.json"));
        let o = tightframe(&["export", "--what", what, "--k", "2", "--output", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["schema"], schema);
    }
    let path = dir.path().join("rules8.json");
    tightframe(&["export", "--what", "rules", "--k", "8", "--output", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["counts"]["generated"], 19200);
}
