use std::io::Write;
use std::process::Command;

use jacobi_cli::report::{ReportBundle, VerificationReport};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("jacobi").chain(args.iter().copied());
    let code = jacobi_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn eval_normalized_legendre_at_zero() {
    let (code, v) = json(&[
        "eval", "--j", "2", "--m", "0", "--q", "0", "--x", "0.0", "--basis", "najf",
    ]);
    assert_eq!(code, 0);
    let want = -0.5 * 2.5f64.sqrt();
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-15);
    assert!(v["d1"].is_number() && v["d2"].is_number());
}

#[test]
fn eval_accepts_doubled_and_fractional_indices() {
    let (_, a) = json(&["eval", "--j2", "3", "--m2", "1", "--q2", "-1", "--x", "0.3"]);
    let (_, b) = json(&[
        "eval", "--j", "3/2", "--m", "0.5", "--q", "-0.5", "--x", "0.3",
    ]);
    assert_eq!(a["value"], b["value"]);
    let (code, v) = json(&[
        "eval", "--j", "1", "--m", "1", "--q", "0", "--x", "1", "--phi", "0.2", "--chi", "0.1",
    ]);
    assert_eq!(code, 0);
    assert!(v["d1"].is_null());
    assert!(v["harmonic"]["re"].is_number() || v["harmonic"].is_array());
}

#[test]
fn eval_rejects_bad_input() {
    let (code, _, err) = run(&["eval", "--j", "2", "--m", "1", "--q", "0", "--x", "1.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    let (code, _, _) = run(&["eval", "--j", "2", "--m", "1", "--q", "1/2", "--x", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["eval", "--j", "2", "--m", "0.25", "--q", "0", "--x", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["verify", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("schema"));
}

#[test]
fn eval_csv() {
    let (code, out, _) = run(&[
        "eval", "--j", "1", "--m", "0", "--q", "0", "--x", "0.5", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("j,m,q,x,basis,value,d1,d2"));
    assert_eq!(lines.next(), Some("1,0,0,0.5,ajf,0.5,1,0"));
}

#[test]
fn table_lists_the_family() {
    let (code, out, _) = run(&[
        "table", "--m", "1", "--q", "0", "--jmax", "3", "--points", "5", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,j=1,j=2,j=3");
    assert_eq!(lines.len(), 6);
    let (code, _, _) = run(&["table", "--m", "1", "--q", "0.5", "--jmax", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn ladder_suite_passes() {
    let (code, v) = json(&["verify", "--suite", "ladder", "--jmax", "8"]);
    assert_eq!(code, 0);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["schema_version"], 1);
    let r: VerificationReport = serde_json::from_value(v).unwrap();
    assert!(r.passed && r.checks.len() == 6);
}

#[test]
fn adjoint_suite_reports_failures() {
    let (code, v) = json(&["verify", "--suite", "adjoint", "--jmax", "2"]);
    assert_eq!(code, 1);
    assert!(v["failure_count"].as_u64().unwrap() > 0);
    assert_eq!(
        v["measurements"]["ajf_coefficient_pairing_max_residual"],
        0.0
    );
}

#[test]
fn mult_suite_carries_ledger() {
    let (code, v) = json(&["verify", "--suite", "mult", "--jmax", "2"]);
    assert_eq!(code, 0);
    assert!(!v["discrepancies"].as_array().unwrap().is_empty());
    let (code, v) = json(&[
        "verify",
        "--suite",
        "mult",
        "--jmax",
        "2",
        "--variant",
        "printed",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["parameters"]["variant"], "printed");
    let (code, out, _) = run(&[
        "verify", "--suite", "mult", "--jmax", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("suite,check,count,tolerance,max_residual,failures"));
    assert!(out.contains("suite,j2,m2,q2,quantity,printed,corrected"));
}

#[test]
fn tolerance_override_is_reported() {
    let (code, v) = json(&["verify", "--suite", "ortho", "--jmax", "4", "--tol", "0"]);
    assert_eq!(code, 1);
    assert_eq!(v["tolerance"], 0.0);
    assert_eq!(v["parameters"]["tolerance_overridden"], true);
    let (code, _, _) = run(&["verify", "--suite", "ortho", "--tol", "-1"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_reproducible() {
    let strip = |mut v: Value| {
        v["runtime_ms"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let args = [
        "verify", "--suite", "seminorm", "--jmax", "6", "--seed", "9",
    ];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(strip(a.clone()), strip(b));
    assert_eq!(a["seed"], 9);
}

#[test]
fn all_suites_bundle() {
    let (code, v) = json(&["verify", "--suite", "all", "--jmax", "2"]);
    let b: ReportBundle = serde_json::from_value(v).unwrap();
    assert_eq!(b.reports.len(), 9);
    assert!(!b.passed && code == 1);
    let failing: Vec<&str> = b
        .reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.suite.as_str())
        .collect();
    assert_eq!(failing, ["adjoint"]);
}

#[test]
fn environment_seed_wins() {
    let out = Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(["verify", "--suite", "parity", "--seed", "1"])
        .env("JACOBI_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 77);
    let out = Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(["verify", "--suite", "parity"])
        .env("JACOBI_SEED", "nope")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_fits_csv_samples() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x,f").unwrap();
    for k in 0..40 {
        let x = -0.975 + 1.95 * f64::from(k) / 39.0;
        writeln!(f, "{x},{}", 3.0 * x * x - 1.0).unwrap();
    }
    let path = f.path().to_str().unwrap();
    let (code, v) = json(&[
        "transform",
        "--m",
        "0",
        "--q",
        "0",
        "--jmax",
        "4",
        "--input",
        path,
    ]);
    assert_eq!(code, 0);
    assert!(v["max_abs_residual"].as_f64().unwrap() < 1e-10);
    let c = v["coefficients"].as_array().unwrap();
    // 3x^2 - 1 = 2 P_2, and P_2 = NJ_2 / sqrt(5/2)
    let c2 = c.iter().find(|r| r["j2"] == 4).unwrap()["re"]
        .as_f64()
        .unwrap();
    assert!((c2 - 2.0 / 2.5f64.sqrt()).abs() < 1e-12);

    let (code, v) = json(&[
        "transform",
        "--m",
        "0",
        "--q",
        "0",
        "--jmax",
        "12",
        "--function",
        "cos",
    ]);
    assert_eq!(code, 0);
    assert!(v["max_abs_residual"].as_f64().unwrap() < 1e-6);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "x,g\n0.1,2").unwrap();
    let (code, _, err) = run(&[
        "transform",
        "--m",
        "0",
        "--q",
        "0",
        "--jmax",
        "2",
        "--input",
        bad.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("no column"));
}

#[test]
fn s3_transform_round_trip_and_fit() {
    for (sector, jmax, range) in [("H", "2", "half"), ("H", "2", "full"), ("F", "1.5", "half")] {
        let (code, v) = json(&[
            "s3-transform",
            "--sector",
            sector,
            "--jmax",
            jmax,
            "--chi-range",
            range,
        ]);
        assert_eq!(code, 0);
        assert!(
            v["round_trip_error"].as_f64().unwrap() < 1e-8,
            "{sector} {range}"
        );
    }

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x,phi,chi,re,im").unwrap();
    let mut k = 0.0f64;
    for _ in 0..60 {
        k += 1.0;
        let (x, phi, chi) = ((0.37 * k).sin(), 0.9 * k, 0.41 * k);
        // normalized (1/2, 1/2, 1/2) harmonic: sqrt((1 - x)/2) e^{i(phi + chi)/2}
        let amp = ((1.0 - x) / 2.0).sqrt();
        let ph = 0.5 * (phi + chi);
        writeln!(f, "{x},{phi},{chi},{},{}", amp * ph.cos(), amp * ph.sin()).unwrap();
    }
    let path = f.path().to_str().unwrap();
    let (code, v) = json(&[
        "s3-transform",
        "--sector",
        "F",
        "--jmax",
        "1.5",
        "--input",
        path,
    ]);
    assert_eq!(code, 0, "{v}");
    assert!(v["max_abs_residual"].as_f64().unwrap() < 1e-10);
    let c = v["coefficients"].as_array().unwrap();
    let top = c
        .iter()
        .find(|r| r["j2"] == 1 && r["m2"] == 1 && r["q2"] == 1)
        .unwrap();
    assert!((top["re"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn gram_outputs() {
    let (code, v) = json(&["gram", "--m", "0.5", "--q", "-0.5", "--jmax", "5.5"]);
    assert_eq!(code, 0);
    assert!(v["max_identity_deviation"].as_f64().unwrap() < 1e-12);
    let (code, v) = json(&["gram", "--sector", "F", "--jmax", "1.5"]);
    assert_eq!(code, 0);
    assert!(v["max_diagonal_deviation"].as_f64().unwrap() < 1e-12);
    let (code, out, _) = run(&[
        "gram", "--m", "0", "--q", "0", "--jmax", "2", "--basis", "ajf", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("j2,0,2,4"));
    let (code, _, _) = run(&["gram", "--sector", "H", "--m", "0", "--jmax", "2"]);
    assert_eq!(code, 2);
}
