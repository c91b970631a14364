//! End-to-end CLI behavior: ingestion formats, exit codes, and output
//! shapes, driving the installed binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_normquot"))
}

fn write(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn metric_dist_happy_path_and_units() {
    let dir = tempfile::tempdir().unwrap();
    let discrete = write(
        dir.path(),
        "discrete3.json",
        r#"{"n":3,"d":[[0,1,1.0],[0,2,1.0],[1,2,1.0]]}"#,
    );
    // the line set {1,2,5} as a CSV matrix
    let line = write(
        dir.path(),
        "line.csv",
        "0,1,4\n1,0,3\n4,3,0\n",
    );
    let out = bin()
        .args(["metric-dist"])
        .arg(&discrete)
        .arg(&line)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let d = v["distance"].as_f64().unwrap();
    assert!((d - 4.0f64.ln()).abs() <= 1e-12);
    assert!(v["proportional_scale"].is_null());

    let out = bin()
        .args(["metric-dist", "--isometry"])
        .arg(&discrete)
        .arg(&discrete)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["distance"].as_f64().unwrap(), 0.0);
    assert_eq!(v["proportional_scale"].as_f64().unwrap(), 1.0);
    assert_eq!(v["isometry"]["found"], serde_json::Value::Bool(true));
}

#[test]
fn metric_dist_rejects_triangle_violation_with_triple() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.csv",
        "0,1,1,1\n1,0,1,1\n1,1,0,9\n1,1,9,0\n",
    );
    let good = write(
        dir.path(),
        "good.json",
        r#"{"n":4,"d":[[0,1,1.0],[0,2,1.0],[0,3,1.0],[1,2,1.0],[1,3,1.0],[2,3,1.0]]}"#,
    );
    let out = bin().arg("metric-dist").arg(&bad).arg(&good).output().unwrap();
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("triangle"), "stderr: {err}");
    assert!(err.contains("(2,") || err.contains("(3,"), "stderr: {err}");
}

#[test]
fn norm_dist_reports_closed_form_and_rejects_bad_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let l1 = write(dir.path(), "l1.json", r#"{"kind":"pnorm","p":1.0}"#);
    let linf = write(dir.path(), "linf.json", r#"{"kind":"pnorm","p":"inf"}"#);
    let out = bin()
        .args(["norm-dist", "--dim", "2", "--samples", "64"])
        .arg(&l1)
        .arg(&linf)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let refined = v["refined"].as_f64().unwrap();
    let closed = v["closed_form"].as_f64().unwrap();
    assert!((closed - 2.0f64.ln()).abs() <= 1e-15);
    assert!((refined - closed).abs() <= 1e-9);

    let bad = write(dir.path(), "bad.json", r#"{"kind":"pnorm","p":0.5}"#);
    let out = bin()
        .args(["norm-dist", "--dim", "2"])
        .arg(&bad)
        .arg(&linf)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("must lie in [1"));

    // scaled pair collapses to zero
    let scaled = write(
        dir.path(),
        "scaled.json",
        r#"{"kind":"scaled","c":2.5,"inner":{"kind":"pnorm","p":1.0}}"#,
    );
    let out = bin()
        .args(["norm-dist", "--dim", "2", "--samples", "32"])
        .arg(&l1)
        .arg(&scaled)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["refined"].as_f64().unwrap(), 0.0);
    assert!(v["closed_form"].as_f64().unwrap() == 0.0);
}

#[test]
fn embed_commands_produce_reports() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(
        dir.path(),
        "star.csv",
        "0,1,1,1\n1,0,2,2\n1,2,0,2\n1,2,2,0\n",
    );
    let out = bin()
        .args(["embed", "schoenberg"])
        .arg(&star)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["embeddable"], serde_json::Value::Bool(false));
    assert!((v["negative_witness"]["eigenvalue"].as_f64().unwrap() + 2.0).abs() <= 1e-12);

    let tri = write(
        dir.path(),
        "tri.json",
        r#"{"n":3,"d":[[0,1,0.6931471805599453],[0,2,0.6931471805599453],[1,2,0.6931471805599453]]}"#,
    );
    let out = bin()
        .args(["embed", "sn", "--n", "3"])
        .arg(&tri)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["membership_ok"], serde_json::Value::Bool(true));
    let max_ratio = v["max_ratio"].as_f64().unwrap();
    assert!((max_ratio - 2.0).abs() <= 1e-12);

    let out = bin().args(["embed", "frechet"]).arg(&star).output().unwrap();
    let v = stdout_json(&out);
    assert!(v["sup_check_max_error"].as_f64().unwrap() <= 1e-15);
    assert_eq!(v["coordinates"].as_array().unwrap().len(), 4);

    // csv coordinate output: one row per point
    let out = bin()
        .args(["embed", "frechet", "--format", "csv"])
        .arg(&star)
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 4);

    let out = bin().args(["embed", "psi"]).arg(&tri).output().unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["psi"].as_array().unwrap().len(), 3);

    // capacity guard: 4 points need n(n-1)/2 >= 4
    let out = bin()
        .args(["embed", "sn", "--n", "3"])
        .arg(&star)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn sample_domain_is_seed_deterministic() {
    let run = || {
        bin()
            .args([
                "sample-domain",
                "--dim",
                "3",
                "--samples",
                "50",
                "--seed",
                "77",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    // canonical points (2k+1) plus the random draws
    assert_eq!(v["points"].as_array().unwrap().len(), 57);

    let csv = bin()
        .args([
            "sample-domain",
            "--dim",
            "2",
            "--samples",
            "0",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&csv.stdout);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn norm_dist_center_threads_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let l1 = write(dir.path(), "l1.json", r#"{"kind":"pnorm","p":1.0}"#);
    let l2 = write(dir.path(), "l2.json", r#"{"kind":"pnorm","p":2.0}"#);
    // off-center domain; sampled bound stays below the true value
    let out = bin()
        .args([
            "norm-dist",
            "--dim",
            "2",
            "--samples",
            "200",
            "--center",
            "0.4,-0.1",
        ])
        .arg(&l1)
        .arg(&l2)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let refined = v["refined"].as_f64().unwrap();
    let closed = v["closed_form"].as_f64().unwrap();
    assert!(refined <= closed + 1e-12);
    assert!(refined > 0.9 * closed);

    // thread count must not change the output bytes
    let run = |threads: &str| {
        bin()
            .args([
                "norm-dist",
                "--dim",
                "3",
                "--samples",
                "500",
                "--threads",
                threads,
            ])
            .arg(&l1)
            .arg(&l2)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    // center length must match the dimension
    let out = bin()
        .args(["norm-dist", "--dim", "3", "--center", "1.0,2.0"])
        .arg(&l1)
        .arg(&l2)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn metric_dist_dimension_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let three = write(
        dir.path(),
        "three.json",
        r#"{"n":3,"d":[[0,1,1.0],[0,2,1.0],[1,2,1.0]]}"#,
    );
    let four = write(dir.path(), "four.csv", "0,1,1,1\n1,0,1,1\n1,1,0,1\n1,1,1,0\n");
    let out = bin().arg("metric-dist").arg(&three).arg(&four).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("differ"));
}

#[test]
fn verify_exit_codes() {
    let out = bin().args(["verify", "apex", "--seed", "1"]).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["total_failures"].as_i64().unwrap(), 0);
    assert_eq!(v["suites"][0]["suite"], "apex");

    let out = bin().args(["verify", "bogus"]).output().unwrap();
    assert_eq!(code(&out), 2);

    let out = bin().args(["verify", "apex", "--tol", "-1"]).output().unwrap();
    assert_eq!(code(&out), 2);
}
