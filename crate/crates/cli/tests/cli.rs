use std::process::{Command, Output};

use serde_json::Value;

fn bcfmop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcfmop")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["checks"]
        .as_array()
        .map(|checks| checks.iter().map(|c| (c["check"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string())).collect())
        .unwrap_or_default()
}

#[test]
fn quick_verify_passes() {
    let out = bcfmop(&["verify", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["result"]["failed"], 0);
    assert!(statuses(&report).iter().all(|(_, s)| s == "pass"));
}

#[test]
fn gauss_coefficients_for_arcsine_parameters() {
    let out = bcfmop(&["bcf", "--r", "1", "--s", "1", "--lambda", "1", "--a", "1/2,1", "--b", "2", "--count", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    // (1/2 + k)(1 + k) / ((2k + 1)(2k + 2)) and (1 + k)(3/2 + k) / ((2k + 2)(2k + 3)) are both 1/4.
    assert_eq!(report["result"]["alpha"], serde_json::json!(["1/4", "1/4", "1/4", "1/4", "1/4"]));
    assert_eq!(report["result"]["first_index"], 1);
}

#[test]
fn bcf_verify_runs_the_series_identity() {
    for form in [&["bcf", "verify"][..], &["bcf", "--verify"][..]] {
        let mut args = form.to_vec();
        args.extend(["--r", "2", "--s", "1", "--lambda", "2", "--a", "1/3,2/5", "--b", "9/4", "--order", "6"]);
        let out = bcfmop(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(statuses(&json(&out)), vec![("euler-gauss".to_string(), "pass".to_string())]);
    }
}

#[test]
fn mop_checks_all_pass() {
    let out = bcfmop(&["mop", "--r", "2", "--s", "2", "--lambda", "1,2", "--a", "1/2,3/4", "--b", "2,5/2", "--n", "8", "--check", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let checks = statuses(&json(&out));
    let names: Vec<&str> = checks.iter().map(|(c, _)| c.as_str()).collect();
    assert_eq!(names, ["cross-construction", "orthogonality", "ode", "derivative-shift", "duality"]);
    assert!(checks.iter().all(|(_, s)| s == "pass"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bcfmop(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bcfmop(&["bcf", "--r", "1", "--s", "1", "--a", "1/2", "--b", "2"]).status.code(), Some(2));
    assert_eq!(bcfmop(&["bcf", "--r", "1", "--s", "1", "--lambda", "1", "--a", "x", "--b", "2"]).status.code(), Some(2));
    assert_eq!(bcfmop(&["bcf", "--preset", "jp-r2", "--r", "2"]).status.code(), Some(2));
    assert_eq!(bcfmop(&["srpoly", "--m", "2", "--alpha", "catalan"]).status.code(), Some(2));
    assert_eq!(bcfmop(&["mop", "--preset", "constant-r1", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_with_one_and_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"[[1, 2], ["1/2", "1/3"]]"#).unwrap();
    let out = bcfmop(&["tp", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("total-positivity") && stderr.contains("minor"), "{stderr}");
}

#[test]
fn replay_reproduces_the_report_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let jobs: [&[&str]; 4] = [
        &["srpoly", "--m", "2", "--alpha", "random", "--seed", "11", "--n", "5", "--kind", "modified"],
        &["prodmat", "--m", "3", "--alpha", "constant-r", "--n", "6", "--output", "--verify"],
        &["mop", "--preset", "jp-r2", "--n", "5"],
        &["zeros", "--r", "2", "--s", "1", "--lambda", "2", "--a", "1/2,3/4", "--b", "7/4", "--n", "7"],
    ];
    for (i, job) in jobs.iter().enumerate() {
        let first = bcfmop(job);
        assert_eq!(first.status.code(), Some(0), "{job:?}: {}", String::from_utf8_lossy(&first.stderr));
        let path = dir.path().join(format!("report{i}.json"));
        std::fs::write(&path, &first.stdout).unwrap();
        let again = bcfmop(&["replay", path.to_str().unwrap()]);
        assert_eq!(again.status.code(), Some(0));
        assert_eq!(first.stdout, again.stdout, "{job:?}");
    }
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.conf");
    std::fs::write(&path, "# arcsine parameters\nr = 1\ns = 1\nlambda = 1\na = 1/2,1\nb = 2\ncount = 6\nverify = true\n").unwrap();
    let out = bcfmop(&["bcf", "--config", path.to_str().unwrap(), "--count", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["result"]["alpha"].as_array().unwrap().len(), 3);
    assert_eq!(report["config"]["command"]["verify"], true);
}

#[test]
fn zeros_as_csv() {
    let out = bcfmop(&["zeros", "--preset", "constant-r1", "--n", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,lower,upper,midpoint");
    let midpoints: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert!((midpoints[0] - 0.25).abs() < 1e-12 && (midpoints[1] - 0.75).abs() < 1e-12, "{midpoints:?}");
}

#[test]
fn worker_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bcfmop"))
        .args(["mop", "--preset", "constant-r2", "--n", "4"])
        .env("BCFMOP_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_bcfmop")).args(["verify", "--quick"]).env("BCFMOP_WORKERS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn srpoly_emits_all_three_families() {
    let out = bcfmop(&["srpoly", "--m", "2", "--alpha-preset", "ones", "--n", "4", "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let kinds: Vec<Value> = report["result"].as_array().unwrap().iter().map(|sr| sr["kind"].clone()).collect();
    assert_eq!(kinds, [serde_json::json!("generalized"), serde_json::json!({"type-j": 1}), serde_json::json!("modified")]);
    // Fuss–Catalan numbers 1, 1, 3, 12 in column 0 of S.
    let column: Vec<&str> = (0..4).map(|n| report["result"][0]["entries"][n][0].as_str().unwrap()).collect();
    assert_eq!(column, ["1", "1", "3", "12"]);

    let csv = bcfmop(&["srpoly", "--m", "1", "--alpha", "catalan", "--n", "3", "--kind", "modified", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,j,row,column,value");
    assert_eq!(lines.len(), 1 + 9);
    assert!(lines.contains(&"modified,0,2,1,5"), "{text}");
}
