use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn params(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../params").join(name)
}

fn suslov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suslov")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn analyze(file: &str) -> Value {
    let out = suslov(&["analyze", "--params", params(file).to_str().unwrap()]);
    assert!(out.status.success());
    json(&out)
}

fn kinds(report: &Value) -> Vec<String> {
    report["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["classification"]["kind"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn analyze_regimes() {
    let r = analyze("reference_a10.json");
    assert_eq!(kinds(&r), ["LinearCenterPair", "Saddle", "LinearCenterPair"]);
    assert_eq!(r["class_a_measure_exists"], true);
    assert_eq!(r["positive_c1_measure_exists"], false);
    assert_eq!(r["class_a_density"]["n"], 3);

    let r = analyze("reference_a00.json");
    assert_eq!(kinds(&r), ["LinearCenterPair", "Saddle", "LinearCenterPair"]);
    assert_eq!(r["class_a_measure_exists"], true);
    assert_eq!(r["positive_c1_measure_exists"], true);

    let r = analyze("reference_a11.json");
    assert_eq!(kinds(&r), ["SourceSinkPair", "Saddle", "SourceSinkPair"]);
    assert_eq!(r["class_a_measure_exists"], false);
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn invalid_input_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"I1\": 3.0,\n  \"I2\": oops\n}\n").unwrap();
    let out = suslov(&["analyze", "--params", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let unordered = dir.path().join("unordered.json");
    std::fs::write(
        &unordered,
        r#"{"I1": 1, "I2": 2, "I3": 3, "K1": 0, "K3": 1, "a1": 0, "a2": 0}"#,
    )
    .unwrap();
    assert_eq!(
        suslov(&["analyze", "--params", unordered.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let p = params("reference_a10.json");
    let out = suslov(&["simulate", "--params", p.to_str().unwrap(), "--omega", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = suslov(&["portrait", "--params", p.to_str().unwrap(), "--eta", "-1", "--out", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_equilibrium_and_conserved_columns() {
    let p = params("reference_a10.json");
    let out = suslov(&[
        "simulate",
        "--params",
        p.to_str().unwrap(),
        "--omega",
        "0,0,1",
        "--T",
        "30",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() > 1);
    for r in &rows {
        assert!((r[1].powi(2) + r[2].powi(2) + (r[3] - 1.0).powi(2)).sqrt() <= 1e-9);
    }

    let out = suslov(&[
        "simulate",
        "--params",
        p.to_str().unwrap(),
        "--omega",
        "0.4,-0.3,0.8",
        "--T",
        "50",
        "--reconstruct",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let r = json(&out);
    assert!(r["energy_drift"].as_f64().unwrap() <= 1e-9);
    assert!(r["first_integral_drift"].as_f64().unwrap() <= 1e-6);
    assert!(r["max_constraint_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_claims() {
    let out = suslov(&["verify", "--params", params("reference_a10.json").to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert!(r["max_residual"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());

    let out = suslov(&["verify", "--params", params("reference_a11.json").to_str().unwrap()]);
    let r = json(&out);
    assert_eq!(r["class_a_measure_exists"], false);
    assert!(r["divergence_witness"].as_f64().unwrap() > 1e-6);

    let out = suslov(&["verify", "--fixture", "planar"]);
    assert!(out.status.success());
    assert!(json(&out)["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn transport_reports_and_exit_codes() {
    let out = suslov(&[
        "transport",
        "--fixture",
        "planar",
        "--T",
        "1",
        "--samples",
        "20000",
        "--seed",
        "4",
    ]);
    assert!(out.status.success());
    let r = json(&out);
    let rep = &r["report"];
    assert!((rep["mu_a"].as_f64().unwrap() - 24.5).abs() <= 3.0 * rep["mu_a_standard_error"].as_f64().unwrap());

    // Lebesgue measure near the sink -v1 of a = (1,1,1) contracts
    let p = params("reference_a11.json");
    let args = |t: &str| {
        suslov(&[
            "transport",
            "--params",
            p.to_str().unwrap(),
            "--density",
            "unit",
            "--lower",
            "0.6,-0.05,-0.31",
            "--upper",
            "0.7,0.05,-0.21",
            "--T",
            t,
            "--samples",
            "200",
        ])
    };
    let short = args("5");
    let long = args("20");
    assert_eq!(long.status.code(), Some(1));
    let (es, el) = (
        json(&short)["report"]["relative_error"].as_f64().unwrap(),
        json(&long)["report"]["relative_error"].as_f64().unwrap(),
    );
    assert!(es < 0.0 && el < es, "{es} {el}");

    let out = suslov(&["transport", "--params", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_stable() {
    let p = params("reference_a10.json");
    let run = || {
        suslov(&[
            "transport",
            "--params",
            p.to_str().unwrap(),
            "--T",
            "2",
            "--samples",
            "300",
            "--seed",
            "9",
        ])
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("time\":"));
}

#[test]
fn portrait_writes_manifest_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("p");
    let p = params("reference_a01.json");
    let out = suslov(&[
        "portrait",
        "--params",
        p.to_str().unwrap(),
        "--samples",
        "4",
        "--T",
        "20",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest: Value = serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    let trajs = manifest["trajectories"].as_array().unwrap();
    assert_eq!(trajs.len(), 4);
    for t in trajs {
        for dir_key in ["forward", "backward"] {
            let file = t[dir_key]["file"].as_str().unwrap();
            let text = std::fs::read_to_string(out_dir.join(file)).unwrap();
            let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
            assert_eq!(header, "t,Omega1,Omega2,Omega3,E");
        }
    }
    assert_eq!(manifest["config"]["seed"], 0);
}
