use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgt-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn passing_solve_exits_zero_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["solve", "--modes", "8", "--dt", "0.01"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.trim_end().ends_with("PASS"), "{stdout}");
    let names = files(dir.path());
    assert!(names.iter().any(|n| n.ends_with("_summary.json")), "{names:?}");
    assert!(names.iter().any(|n| n.ends_with("_report.csv")), "{names:?}");
    let summary = names.iter().find(|n| n.ends_with("_summary.json")).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(summary)).unwrap()).unwrap();
    assert!(json.is_object());
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["compare-oracle", "--modes", "8", "--dt", "0.01", "--tol", "1e-30"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).trim_end().ends_with("FAIL"));
}

#[test]
fn unknown_config_field_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"modes": [8], "no_such_field": 1}"#).unwrap();
    let out = run(&["solve", "--config", cfg.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    let err = std::fs::read_to_string(dir.path().join("out/error.json")).unwrap();
    assert!(err.contains("\"config\""), "{err}");
}

#[test]
fn bad_tolerance_and_ladders_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["solve", "--tol", "no_such_tol=1"],
        vec!["solve", "--tol", "abc"],
        vec!["solve", "--dt", "-0.1"],
        vec!["witness", "--modes", "16"],
        vec!["convergence", "--dt", "0.01,0.005"],
    ] {
        let out = run(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"name": "tiny", "modes": [4], "time": {"t_final": 0.5, "dt": [0.001]}, "domain": {"kind": "unit_interval", "grid_points_per_axis": 64}}"#,
    )
    .unwrap();
    let out = run(&["compare-oracle", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(files(dir.path()).iter().any(|n| n.contains("tiny")), "{:?}", files(dir.path()));
}
