use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn assouad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assouad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(String::from)
        .collect()
}

#[test]
fn generate_example_2_7() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"variant": "Example27", "N": 9, "K": 3, "depth": 6}"#).unwrap();
    let out = dir.path().join("out");
    let o = assouad(&["generate", "--spec", p(&spec), "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&out.join("cloud.csv"));
    assert_eq!(rows.len(), 729);
    assert_eq!(rows[0], "0");
}

#[test]
fn single_point_estimate_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.csv");
    fs::write(&input, "# dim=2 resolution=0\n0.25,0.5\n").unwrap();
    let o = assouad(&["estimate", "--input", p(&input), "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("estimate.json"));
    for m in ["box", "assouad"] {
        assert_eq!(v[m]["value"], 0.0);
        assert_eq!(v[m]["diagnostics"]["degenerate"], true);
    }
}

#[test]
fn estimate_writes_a_profile_and_honors_pins() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("grid.csv");
    let mut text = String::from("# dim=1 resolution=0.0005\n");
    for i in 0..=1024 {
        text.push_str(&format!("{}\n", i as f64 / 1024.0));
    }
    fs::write(&input, text).unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"assouad": {"big_scales": [0.25], "ratios": [2, 4, 8, 16, 32, 64], "max_centers": 2, "keep_profile": true}}"#).unwrap();
    let o = assouad(&[
        "estimate", "--input", p(&input), "--out", p(dir.path()), "--config", p(&cfg), "--pin-center", "0.3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("estimate.json"));
    // Grid counts carry a +1 boundary term, so the slope sits a little under 1.
    assert!((v["box"]["value"].as_f64().unwrap() - 1.0).abs() < 0.05);
    assert!((v["assouad"]["value"].as_f64().unwrap() - 1.0).abs() < 0.1);
    assert!(!data_rows(&dir.path().join("profile.csv")).is_empty());
    // Sampled centers 0 and 1/2 plus the pin snapped to 307/1024, six ratios each.
    let profile = data_rows(&dir.path().join("assouad_profile.csv"));
    assert_eq!(profile.len(), 18);
    assert!(profile.iter().any(|r| r.starts_with("0.2998046875,")));
}

#[test]
fn distance_set_pipelines_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    fs::write(&input, "# dim=1 resolution=0\n0\n1\n3\n7\n").unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(assouad(&["distance-set", "--input", p(&input), "--out", p(&a)]).status.success());
    assert!(assouad(&["distance-set", "--input", p(&input), "--out", p(&b), "--via-projection"]).status.success());
    let da = fs::read_to_string(a.join("distances.csv")).unwrap();
    assert_eq!(da, fs::read_to_string(b.join("distances.csv")).unwrap());
    assert_eq!(data_rows(&a.join("distances.csv")), ["0", "1", "2", "3", "4", "6", "7"]);
}

#[test]
fn gap_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = assouad(&["gap-report", "--a", "0.5", "--b", "0.25", "--m", "50", "--lo", "-1", "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("gap_report.json"));
    assert_eq!(v["M"], 50);
    // ln 2 at 12 significant digits.
    assert_eq!(v["max_gap"].to_string(), "0.69314718056");
}

#[test]
fn project_sweep_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"variant": "Product",
            "a": {"variant": "PlainIFS", "depth": 5, "ifs": {"maps": [
                {"scale": 0.3333333333333333, "translation": [0]},
                {"scale": 0.3333333333333333, "translation": [0.6666666666666666]}]}},
            "b": {"variant": "PlainIFS", "depth": 5, "ifs": {"maps": [
                {"scale": 0.3333333333333333, "translation": [0]},
                {"scale": 0.3333333333333333, "translation": [0.6666666666666666]}]}}}"#,
    )
    .unwrap();
    let gen = dir.path().join("gen");
    assert!(assouad(&["generate", "--spec", p(&spec), "--out", p(&gen)]).status.success());
    let out = dir.path().join("sweep");
    let o = assouad(&[
        "project-sweep", "--input", p(&gen.join("cloud.csv")), "--directions", "8", "--threshold", "0.5",
        "--out", p(&out), "--workers", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out.join("sweep.json"));
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert_eq!(v["threshold"], 0.5);
    assert_eq!(data_rows(&out.join("sweep.csv")).len(), 8);
}

#[test]
fn spanning_check_reads_a_curve() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("curve.csv");
    let mut text = String::from("t,x,y,z\n");
    for i in 1..=50 {
        let t = i as f64 / 51.0;
        let a = std::f64::consts::TAU * t;
        text.push_str(&format!("{t},{},{},0\n", a.cos(), a.sin()));
    }
    fs::write(&input, text).unwrap();
    let o = assouad(&["spanning-check", "--input", p(&input), "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("spanning.json"));
    assert_eq!(v["spans_everywhere"], false);
    assert_eq!(data_rows(&dir.path().join("spanning.csv")).len(), 48);
}

#[test]
fn tangent_zoom_traces_example_1_4() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("zoom.json");
    fs::write(
        &spec,
        r#"{"construction": {"variant": "Example14", "kmax": 12},
            "rule": {"rule": "example14"},
            "k_range": [1, 12],
            "exact": true}"#,
    )
    .unwrap();
    let o = assouad(&["tangent-zoom", "--spec", p(&spec), "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("trace.json"));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for r in rows {
        let k = r["k"].as_f64().unwrap();
        assert!(r["distance"].as_f64().unwrap() <= 1.0 / (2.0 * k) + 2f64.powi(-11));
    }
    assert_eq!(data_rows(&dir.path().join("frame_4.csv")), ["0", "0.25", "0.5", "0.75", "1"]);
}

#[test]
fn verify_paper_subset() {
    let dir = tempfile::tempdir().unwrap();
    let o = assouad(&["verify-paper", "--only", "4,9", "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&dir.path().join("verify_report.json"));
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(
        ids,
        ["lattice.irrational", "lattice.rational", "formulas.fe_continuity", "formulas.exception_boundary"]
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("4/4 checks passed"));
}

#[test]
fn compute_errors_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "# dim=2 resolution=0\n0,1\n2\n").unwrap();
    let o = assouad(&["estimate", "--input", p(&input), "--out", p(dir.path())]);
    assert!(!o.status.success());
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "format");
    let o = assouad(&["gap-report", "--a", "0.5", "--b", "0.25", "--lo", "-0.6", "--hi", "-0.5", "--out", p(dir.path())]);
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "empty_intersection");
}

#[test]
fn unwritable_output_fails_before_compute() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "").unwrap();
    let o = assouad(&["verify-paper", "--out", p(&file.join("sub"))]);
    assert!(!o.status.success());
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "io");
}

#[test]
fn usage_errors() {
    let o = assouad(&["frobnicate"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert!(!assouad(&["estimate", "--input", "x", "--no-such-flag"]).status.success());
}
