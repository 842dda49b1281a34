use std::fs;
use std::process::{Command, Output};

fn bec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bec")).args(args).output().expect("spawn bec")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "bec failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header and rows of a CSV emitted by the tool, skipping `#` metadata.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h.starts_with(&format!("{name}["))).unwrap()
}

#[test]
fn validity_reports() {
    let small = stdout(&bec(&["validity", "--n", "100"]));
    assert!(small.starts_with("INVALID"));
    assert!(small.contains("n_min: 9616.455225"));
    let disk = stdout(&bec(&["validity", "--shape", "disk", "--s", "2", "--n", "1e5"]));
    assert!(disk.starts_with("VALID"));
    let edge = stdout(&bec(&["validity", "--n", "9616.455225276754", "--threshold", "20"]));
    assert!(edge.contains("margin: 1.000000"));
    let json = stdout(&bec(&["validity", "--n", "1e4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn fig1_endpoints_and_determinism() {
    let args = ["fig1", "--points", "2", "--n-max", "1e6"];
    let a = stdout(&bec(&args));
    let b = stdout(&bec(&args));
    assert_eq!(a, b);
    let (header, rows) = parse_csv(&a);
    assert_eq!(header[0], "log10_n[-]");
    assert_eq!(header.len(), 6);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], 4.0);
    assert_eq!(rows[1][0], 6.0);
    assert!(!a.contains('\r'));
}

#[test]
fn fig1_defaults_converge() {
    let out = Command::new(env!("CARGO_BIN_EXE_bec"))
        .arg("fig1")
        .env("BEC_NUM_WORKERS", "4")
        .output()
        .unwrap();
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 25);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    let last = rows.last().unwrap();
    assert_eq!(last[0], 7.0);
    for (i, v) in last.iter().enumerate().skip(1) {
        assert!((v - 1.0).abs() < 0.05, "{} = {v}", header[i]);
    }
    let (t1, t01) = (col(&header, "t_1pct_ratio"), col(&header, "t_0.1pct_ratio"));
    assert!(rows.iter().all(|r| r[t1] < r[t01]));
}

#[test]
fn fig1_below_validity_range_needs_unsafe() {
    let refused = bec(&["fig1", "--n-min", "500", "--n-max", "1e4", "--points", "2"]);
    assert!(!refused.status.success());
    let out = stdout(&bec(&["fig1", "--n-min", "500", "--n-max", "1e4", "--points", "2", "--unsafe"]));
    assert!(out.contains("# unsafe = true"));
}

#[test]
fn fig2_curves() {
    let text = stdout(&bec(&["fig2"]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 60);
    let a = col(&header, "f0_N10000");
    let b = col(&header, "f0_N100000");
    for c in [a, b] {
        assert!(rows.windows(2).all(|w| w[1][c] < w[0][c]));
    }
    // The smaller gas condenses at lower rescaled temperature.
    assert!(rows.iter().filter(|r| r[b] > 0.01).all(|r| r[a] < r[b]));
    for tag in ["N10000", "N100000"] {
        let f = rows[0][col(&header, &format!("f0_at_first_order_{tag}"))];
        assert!((0.0005..=0.02).contains(&f), "{tag}: {f}");
    }
    assert_eq!(rows[0][col(&header, "window_lo")], 0.001);
    assert_eq!(rows[0][col(&header, "window_hi")], 0.01);
}

#[test]
fn anisoscan_boundaries() {
    let disk = stdout(&bec(&["anisoscan", "--shape", "disk", "--points", "3"]));
    assert!(disk.contains("# validity_s_max = 3.2\n"));
    let cigar = stdout(&bec(&["anisoscan", "--shape", "cigar", "--points", "3", "--s-max-scan", "20"]));
    assert!(cigar.contains("# validity_s_max = 10.4\n"));
    let (header, rows) = parse_csv(&cigar);
    let valid = col(&header, "valid");
    assert_eq!(rows.iter().map(|r| r[valid]).collect::<Vec<_>>(), vec![1.0, 0.0, 0.0]);
    assert!(!bec(&["anisoscan", "--shape", "isotropic"]).status.success());
    assert!(!bec(&["anisoscan"]).status.success());
}

#[test]
fn solve_one_shot() {
    let text = stdout(&bec(&["solve", "--n", "1e4", "--t", "10", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["f0"].as_f64().unwrap() > 0.5);
    assert!(!bec(&["solve", "--n", "1e4"]).status.success());
}

#[test]
fn json_output_shape() {
    let text = stdout(&bec(&["fig2", "--n", "1e4", "--t-points", "10", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["metadata"]["figure"], "fig2");
    assert_eq!(v["columns"][0]["name"], "t_over_tc0");
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("table.csv");
    fs::write(&cfg, format!("# fig1 run\npoints = 3\nn_max = 1e5\nout = {}\n", out.display())).unwrap();
    let status = bec(&["fig1", "--config", cfg.to_str().unwrap(), "--points", "2"]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let (_, rows) = parse_csv(&fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], 5.0);
}

#[test]
fn failures_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let r = bec(&["fig2", "--n", "10", "--out", out.to_str().unwrap()]);
    assert!(!r.status.success());
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&r.stderr).contains("error"));
}

#[test]
fn overlay_columns_are_joined() {
    let dir = tempfile::tempdir().unwrap();
    let overlay = dir.path().join("ref.csv");
    fs::write(&overlay, "log10_n[-],generalized[Tc0]\n4,0.981\n5.5,0.99\n").unwrap();
    let text = stdout(&bec(&[
        "fig1", "--points", "2", "--n-max", "1e5", "--overlay", overlay.to_str().unwrap(),
    ]));
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(lines[0].ends_with(",overlay_generalized[Tc0]"));
    assert!(lines[1].ends_with(",0.981"));
    assert!(lines[2].ends_with(",NaN"));
}
