use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn path(rel: &str) -> String {
    scenarios().join(rel).to_string_lossy().into_owned()
}

fn lcfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcfn")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn compare_reports_tier() {
    let tri = path("generators/tri.json");
    let out = lcfn(&["compare", "--gen", &tri, "3+2A", "3-2A", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "Greater (tier III)\n");

    let out = lcfn(&["compare", "--gen", &tri, "4", "4", "--format", "text"]);
    assert_eq!(stdout(&out), "Equal\n");

    let v = json(&lcfn(&["compare", "--gen", &tri, "-1.5A", "2"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ordering"], "Less");
    assert_eq!(v["tier"], "I");
}

#[test]
fn malformed_literal_is_a_usage_error() {
    let out = lcfn(&["compare", "--gen", &path("generators/tri.json"), "3+", "4"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("syntax error at byte 2"), "{err}");
}

#[test]
fn element_verbs() {
    let tri = path("generators/tri.json");
    let v = json(&lcfn(&["norm", "--gen", &tri, "3-2A"]));
    assert_eq!(v["norm"], 5.0);
    let v = json(&lcfn(&["classify", "--gen", &path("generators/am05.json"), "1-2A"]));
    assert_eq!(v["class"], "zero-class");
    let v = json(&lcfn(&["cross", "--gen", &tri, "2", "1+A"]));
    assert_eq!(v["product"]["r"], 2.0);
    assert_eq!(v["product"]["q"], 2.0);
    let v = json(&lcfn(&["alpha-level", "--gen", &tri, "1+2A", "--alpha", "0"]));
    assert_eq!(v["interval"]["lo"], -1.0);
    assert_eq!(v["interval"]["hi"], 5.0);
    assert_eq!(code(&lcfn(&["alpha-level", "--gen", &tri, "1", "--alpha", "2"])), 2);
}

#[test]
fn integrate_example() {
    let v = json(&lcfn(&["integrate", "--gen", &path("generators/tri.json"), "--r", "t", "--q", "t", "--domain", "0", "1"]));
    assert_eq!(v["r"], 0.5);
    assert_eq!(v["q"], 0.5);
}

#[test]
fn differentiate_prints_expressions() {
    let out = lcfn(&["differentiate", "--gen", &path("generators/tri.json"), "--r", "t^3", "--q", "sin(t)", "--domain", "0", "1", "--at", "0.5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["r"], "3*t^2");
    assert_eq!(v["q"], "cos(t)");
    assert_eq!(v["at"]["value"]["r"], 0.75);
    assert_eq!(code(&lcfn(&["differentiate", "--scenario", &path("catalog/01_polynomial.json"), "--order", "4"])), 2);
}

#[test]
fn critical_points_default_domain() {
    let v = json(&lcfn(&["critical-points", "--gen", &path("generators/am1.json"), "--r", "t^2", "--q", "t"]));
    assert_eq!(v["domain"], serde_json::json!([-1.0, 1.0]));
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert_eq!(points[0]["verdict"], "LocalMin");
    assert!((points[0]["t_star"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert_eq!(points[0]["verification"]["status"], "holds");
}

#[test]
fn failed_check_exits_one() {
    let out = lcfn(&["verify", "dbr-forward", "--scenario", &path("catalog/07_dbr_perturbed.json")]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["violation_detected"], true);
    assert_eq!(v["passed"], false);
}

#[test]
fn passing_checks_exit_zero() {
    for args in [
        vec!["verify", "dbr-forward", "--gen", &path("generators/tri.json"), "--scenario", &path("catalog/06_dbr_exact.json")],
        vec!["verify", "ftc", "--scenario", &path("catalog/03_exp_log.json")],
        vec!["verify", "ibp", "--scenario", &path("catalog/02_sine_square.json")],
        vec!["verify", "square-integral", "--scenario", &path("catalog/04_center_zero.json")],
        vec!["verify", "interchange", "--scenario", &path("interchange.json")],
        vec!["verify", "lagrange", "--scenario", &path("constant_one.json"), "--harness", &path("harness.json")],
    ] {
        let out = lcfn(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["passed"], true, "{args:?}");
    }
}

#[test]
fn dbr_forward_defaults_f_to_derivative_of_g() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("g_only.json");
    std::fs::write(
        &s,
        r#"{"gen":{"kind":"triangular","left":-1,"peak":0,"right":2},"domain":[0,3.141592653589793],
            "g":{"r":"sin(t)","q":"t^2"}}"#,
    )
    .unwrap();
    let out = lcfn(&["verify", "dbr-forward", "--scenario", s.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn non_convergence_exits_three() {
    let out = lcfn(&["integrate", "--gen", &path("generators/tri.json"), "--r", "sqrt(t)", "--q", "0", "--domain", "0", "1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance"));
    let out = lcfn(&["integrate", "--gen", &path("generators/tri.json"), "--r", "log(t)", "--domain", "-1", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_two() {
    let tri = path("generators/tri.json");
    let (interchange, constant, harness) = (path("interchange.json"), path("constant_one.json"), path("harness.json"));
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["integrate", "--r", "t", "--domain", "0", "1"],
        vec!["integrate", "--gen", &tri, "--r", "t"],
        vec!["integrate", "--gen", &tri, "--r", "t +", "--domain", "0", "1"],
        vec!["integrate", "--gen", &tri, "--r", "t", "--domain", "1", "0"],
        vec!["integrate", "--gen", "/nonexistent.json", "--r", "t", "--domain", "0", "1"],
        vec!["integrate", "--gen", &tri, "--r", "t", "--domain", "0", "1", "--tol", "-1"],
        vec!["integrate", "--gen", &tri, "--r", "t", "--domain", "0", "1", "--method", "trapezoid"],
        vec!["integrate", "--gen", &tri, "--r", "t", "--domain", "0", "1", "--format", "csv"],
        vec!["verify", "ibp", "--scenario", &interchange],
        vec!["verify", "interchange", "--scenario", &constant],
        vec!["norm", "--gen", &harness, "1"],
    ];
    for args in cases {
        let out = lcfn(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn csv_for_grid_reports() {
    let out = lcfn(&["verify", "dbr-reconstruct", "--scenario", &path("catalog/08_zero_center_periodic.json"), "--grid", "16", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("t,accumulated_r"));
    assert_eq!(lines.count(), 16);

    let out = lcfn(&["verify", "dbr-forward", "--scenario", &path("catalog/06_dbr_exact.json"), "--format", "csv"]);
    assert_eq!(stdout(&out).lines().count(), 9);
}

#[test]
fn writes_to_out_file_and_respects_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let args = ["verify", "lagrange", "--scenario", &path("catalog/10_sine_cosine.json"), "--scan", "--harness"];
    let harness = dir.path().join("h.json");
    std::fs::write(&harness, r#"{"grid":24,"k":[2,8]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lcfn"))
        .args(args)
        .arg(&harness)
        .arg("--out")
        .arg(&target)
        .env("LCFN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let single: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(single["summary"]["points"], 24);

    let parallel = Command::new(env!("CARGO_BIN_EXE_lcfn")).args(args).arg(&harness).env("LCFN_THREADS", "4").output().unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&parallel.stdout).unwrap(), single);

    let bad = Command::new(env!("CARGO_BIN_EXE_lcfn")).args(args).arg(&harness).env("LCFN_THREADS", "zero").output().unwrap();
    assert_eq!(code(&bad), 2);
}
