use std::path::PathBuf;
use std::process::{Command, Output};

fn acl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acl")).args(args).env("ACL_THREADS", "1").output().unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(acl(&["analyze", "/nonexistent.json", "--analysis", "closure"]).status.code(), Some(2));
    assert_eq!(acl(&["analyze", &fixture("two_cycles_coloc.json"), "--analysis", "bogus"]).status.code(), Some(2));
    assert_eq!(acl(&["suite", "S3.6", "--budget", "20", "--seed", "1"]).status.code(), Some(0));
    assert_eq!(acl(&["suite", "B3.2", "--budget", "500", "--seed", "42"]).status.code(), Some(1));
    assert_eq!(acl(&["suite", "nope", "--budget", "1", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn analyze_prints_canonical_json_and_csv() {
    let file = fixture("two_cycles_coloc.json");
    let out = acl(&["analyze", &file, "--analysis", "coloc"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["analysis"], "coloc");
    assert_eq!(out.stdout, acl(&["analyze", &file, "--analysis", "coloc"]).stdout);
    let csv = acl(&["analyze", &file, "--analysis", "coloc", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    assert!(!csv.stdout.is_empty());
}

#[test]
fn every_analysis_runs_on_a_metric_fixture() {
    let file = fixture("grid_rotation_16_3.json");
    for a in [
        "closure", "commutator", "cantor", "setwise", "sord", "fixed", "quantified", "intrinsic", "coloc", "statewise",
        "comanence", "converse", "probe",
    ] {
        let out = acl(&["analyze", &file, "--analysis", a, "--scale", "0.125"]);
        assert!(matches!(out.status.code(), Some(0 | 1)), "{a}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn generate_and_oracle_round_trip() {
    let dir = std::env::temp_dir().join(format!("acl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("perm.json").display().to_string();
    assert_eq!(acl(&["generate", "random_perm", "--n", "6", "--seed", "3", "-o", &path]).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    acl(&["generate", "random_perm", "--n", "6", "--seed", "3", "-o", &path]);
    assert_eq!(std::fs::read(&path).unwrap(), first);
    for which in ["commutator", "setwise", "fixed", "coloc"] {
        assert_eq!(acl(&["oracle", &path, "--which", which]).status.code(), Some(0), "{which}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
