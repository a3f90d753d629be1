//! End-to-end tests against the built binary.

use std::process::{Command, Output};

use serde_json::Value;

fn quasijoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasijoint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = quasijoint(args);
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn witness_pole_state_reports_negativity() {
    let report = stdout_json(&["witness", "--bloch", "0,0,1", "--format", "json"]);
    let witness = &report["witness"];
    assert_eq!(witness["nonclassical"], Value::Bool(true));
    let min_entry = witness["min_entry"].as_f64().unwrap();
    assert!((min_entry + 0.2311252).abs() < 5e-8);
    assert_eq!(witness["eta"].as_f64().unwrap(), 0.9);
}

#[test]
fn witness_maximally_mixed_state_is_not_flagged() {
    let report = stdout_json(&["witness", "--bloch", "0,0,0", "--format", "json"]);
    let witness = &report["witness"];
    assert_eq!(witness["nonclassical"], Value::Bool(false));
    assert_eq!(witness["status"], Value::String("maximally_mixed".into()));
    for entry in witness["quasi"]["entries"].as_array().unwrap() {
        assert_eq!(entry.as_f64().unwrap(), 0.25);
    }
}

#[test]
fn witness_accepts_pure_state_input() {
    let report = stdout_json(&[
        "witness", "--pure", "1,1,1", "--dim", "3", "--format", "json",
    ]);
    let witness = &report["witness"];
    assert_eq!(witness["nonclassical"], Value::Bool(true));
    let canonical = witness["canonical"].as_object().unwrap();
    assert!((canonical["z"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn witness_accepts_density_input() {
    let report = stdout_json(&[
        "witness",
        "--density",
        "0.5,0.25-0.25i,0.25+0.25i,0.5",
        "--format",
        "json",
    ]);
    let input = witness_input(&report);
    assert!((input.0 - 0.5).abs() < 1e-12);
    assert!((input.1 - 0.5).abs() < 1e-12);
    assert!(input.2.abs() < 1e-12);
}

fn witness_input(report: &Value) -> (f64, f64, f64) {
    let s = report["witness"]["input"].as_object().unwrap();
    (
        s["x"].as_f64().unwrap(),
        s["y"].as_f64().unwrap(),
        s["z"].as_f64().unwrap(),
    )
}

#[test]
fn separability_verdicts_follow_the_threshold() {
    let report = stdout_json(&[
        "separability",
        "--bloch",
        "0,0,1",
        "--eta",
        "1",
        "--format",
        "json",
    ]);
    let verdict = &report["separability"]["verdict"];
    assert_eq!(verdict["feasible"], Value::Bool(false));
    assert_eq!(verdict["regime"], Value::String("beyond_unit_bound".into()));

    let report = stdout_json(&[
        "separability",
        "--bloch",
        "0,0,0",
        "--eta",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(
        report["separability"]["verdict"]["feasible"],
        Value::Bool(true)
    );

    let report = stdout_json(&[
        "separability",
        "--bloch",
        "0,0,0.2",
        "--eta",
        "1",
        "--format",
        "json",
    ]);
    let verdict = &report["separability"]["verdict"];
    assert_eq!(verdict["feasible"], Value::Bool(true));
    assert!(verdict["witness_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn sweep_emits_stable_csv() {
    let out = quasijoint(&[
        "sweep",
        "--s-steps",
        "4",
        "--eta-steps",
        "3",
        "--rings",
        "8",
        "--angles",
        "16",
    ]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "s,eta,min_entry,nonclassical,lp_verdict");
    assert_eq!(lines.len(), 1 + 4 * 3);
    // Lexicographic (s, eta) row order.
    let keys: Vec<(f64, f64)> = lines[1..]
        .iter()
        .map(|l| {
            let mut parts = l.split(',');
            let s: f64 = parts.next().unwrap().parse().unwrap();
            let eta: f64 = parts.next().unwrap().parse().unwrap();
            (s, eta)
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    // The full-strength pure-state row.
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    let min_entry: f64 = last[2].parse().unwrap();
    assert!((min_entry - 0.25 * (1.0 - 3.0_f64.sqrt())).abs() < 1e-12);
    assert_eq!(last[3], "true");
    assert_eq!(last[4], "infeasible");
}

#[test]
fn sample_certifies_only_with_enough_statistics() {
    let report = stdout_json(&[
        "sample", "--bloch", "0,0,1", "--eta", "1", "--shots", "100000", "--seed", "7", "--format",
        "json",
    ]);
    assert_eq!(
        report["sampling"]["significance"]["certified"],
        Value::Bool(true)
    );

    let report = stdout_json(&[
        "sample", "--bloch", "0,0,1", "--eta", "1", "--shots", "10", "--seed", "7", "--format",
        "json",
    ]);
    assert_eq!(
        report["sampling"]["significance"]["certified"],
        Value::Bool(false)
    );

    let report = stdout_json(&[
        "sample", "--bloch", "0,0,0", "--shots", "1000", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(
        report["sampling"]["significance"]["certified"],
        Value::Bool(false)
    );
}

#[test]
fn rerunning_a_report_reproduces_it_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();

    let out = quasijoint(&[
        "sample",
        "--bloch",
        "0.3,-0.2,0.4",
        "--shots",
        "5000",
        "--seed",
        "23",
        "--format",
        "json",
        "--output",
        path_str,
    ]);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&path).unwrap();

    // The echoed config carries the same output path, so the rerun
    // rewrites the file; identical bytes mean exact reproduction.
    let out = quasijoint(&["run", "--config", path_str]);
    assert!(out.status.success());
    let second = std::fs::read_to_string(&path).unwrap();
    assert_eq!(first, second);
}

#[test]
fn toml_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        r#"
command = "witness"
eta = 1.0

[state.bloch]
components = [0.0, 0.0, 1.0]
"#,
    )
    .unwrap();
    let out = quasijoint(&["run", "--config", path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("NONCLASSICAL"));
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["witness", "--bloch", "0,0,2"],
        vec!["witness", "--bloch", "0,0,1", "--pure", "1,0"],
        vec!["witness"],
        vec!["witness", "--bloch", "0,0,1", "--eta", "1.5"],
        vec!["witness", "--bloch", "0,0"],
        vec!["witness", "--density", "1,0,0"],
        vec!["witness", "--pure", "1,1,1", "--dim", "4"],
        vec!["sample", "--bloch", "0,0,1", "--shots", "0", "--seed", "1"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = quasijoint(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {:?} gave {:?}: {}",
            args,
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn unreadable_config_exits_with_code_two() {
    let out = quasijoint(&["run", "--config", "/definitely/not/here.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "not = valid [ config").unwrap();
    let out = quasijoint(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
