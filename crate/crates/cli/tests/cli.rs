//! End-to-end runs of the `qrisk` binary.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qrisk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrisk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn assert_deterministic(args: &[&str]) -> BTreeMap<String, Vec<u8>> {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = qrisk(args, a.path());
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let second = qrisk(args, b.path());
    assert!(second.status.success());
    let (x, y) = (contents(a.path()), contents(b.path()));
    assert!(!x.is_empty());
    assert_eq!(x, y, "outputs differ between runs of {args:?}");
    x
}

fn csv_rows(bytes: &[u8]) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            header
                .iter()
                .zip(rec.unwrap().iter())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

#[test]
fn tbill_is_deterministic_and_reaches_the_sine_grid() {
    let files = assert_deterministic(&[
        "tbill",
        "--m",
        "4",
        "--shots",
        "8192",
        "--seed",
        "7",
        "--report-gates",
        "--dump-circuit",
    ]);
    let rows = csv_rows(&files["tbill_errors.csv"]);
    let m4 = rows.iter().find(|r| r["m"] == "4").unwrap();
    let est: f64 = m4["estimate"].parse().unwrap();
    assert!((est - 0.3087).abs() < 1e-4);
    let err: f64 = m4["error"].parse().unwrap();
    let hw: f64 = m4["mc_half_width"].parse().unwrap();
    assert!(err < hw);
    assert!(files.contains_key("tbill_gates.csv"));
    assert!(files.contains_key("tbill_m4.circuit"));
}

#[test]
fn tbill_single_qubit_histogram_has_two_outcomes() {
    let files = assert_deterministic(&["tbill", "--m", "1"]);
    let rows = csv_rows(&files["tbill_histograms.csv"]);
    assert_eq!(rows.len(), 2);
    let estimates: Vec<f64> = rows
        .iter()
        .map(|r| r["estimate"].parse().unwrap())
        .collect();
    assert_eq!(estimates, vec![0.0, 1.0]);
}

#[test]
fn portfolio_reports_every_method() {
    let files = assert_deterministic(&["portfolio", "--synthetic", "--m", "5", "--report-gates"]);
    let rows = csv_rows(&files["reports.csv"]);
    assert_eq!(rows.len(), 7);
    let oracle = rows.iter().find(|r| r["method"] == "oracle").unwrap();
    let m5 = rows
        .iter()
        .find(|r| r["method"] == "quantum" && r["m"] == "5")
        .unwrap();
    let (o, q): (f64, f64) = (
        oracle["var_index"].parse().unwrap(),
        m5["var_index"].parse().unwrap(),
    );
    assert!((q - o).abs() <= 0.1 * o);
    let gates = csv_rows(&files["var_gates.csv"]);
    for r in gates.iter().skip(1) {
        let ratio: f64 = r["ratio"].parse().unwrap();
        assert!((1.8..=2.6).contains(&ratio));
    }
    for name in [
        "pca.csv",
        "model.json",
        "report_oracle.json",
        "report_monte_carlo.json",
        "report_quantum_m5.json",
    ] {
        assert!(files.contains_key(name), "{name} missing");
    }
    let report: serde_json::Value =
        serde_json::from_slice(&files["report_quantum_m5.json"]).unwrap();
    assert_eq!(report["schema_version"], 1);
}

#[test]
fn portfolio_reads_a_rate_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("cmt.csv");
    let mut text = String::from("date,0.25,0.5,1,2,3,5,7,10,20,30\n");
    for day in 0..60 {
        let wiggle = ((day * 7 % 11) as f64 - 5.0) * 0.01;
        let twist = ((day * 5 % 7) as f64 - 3.0) * 0.005;
        let r1 = 1.8 + wiggle - twist;
        let r2 = 2.25 + wiggle + twist;
        text.push_str(&format!(
            "2021-{:02}-{:02},1.5,1.6,{r1:.4},{r2:.4},2.4,2.6,2.8,3.0,3.2,3.3\n",
            1 + day / 28,
            1 + day % 28
        ));
    }
    text.push_str("2021-04-01,1.5,,1.8,2.2,2.4,2.6,2.8,3.0,3.2,3.3\n");
    fs::write(&data, text).unwrap();
    let out = dir.path().join("out");
    let run = qrisk(
        &["portfolio", "--data", data.to_str().unwrap(), "--m", "3"],
        &out,
    );
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let model: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("model.json")).unwrap()).unwrap();
    assert_eq!(model["rows"], 60);
}

#[test]
fn noise_sweep_is_deterministic() {
    let files = assert_deterministic(&[
        "noise-sweep",
        "--gamma",
        "0,1e-5",
        "--crosstalk",
        "0,-0.01",
        "--trajectories",
        "8",
    ]);
    let rows = csv_rows(&files["noise.csv"]);
    assert_eq!(rows.len(), 4);
    let p: f64 = rows[0]["probability"].parse().unwrap();
    assert!((p - 1.0).abs() < 1e-9);
}

#[test]
fn convergence_is_deterministic() {
    let files = assert_deterministic(&["convergence", "--m", "4", "--trials", "20"]);
    assert_eq!(csv_rows(&files["convergence.csv"]).len(), 3);
    let summary: serde_json::Value =
        serde_json::from_slice(&files["convergence_summary.json"]).unwrap();
    assert!(summary["quantum_slope"].is_number());
}

#[test]
fn failures_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let run = qrisk(
        &["portfolio", "--data", "/definitely/missing.csv"],
        dir.path(),
    );
    assert!(!run.status.success());
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("/definitely/missing.csv"), "{err}");
    let bad = qrisk(&["tbill", "--shots", "-3"], dir.path());
    assert!(!bad.status.success());
}
