use std::path::Path;
use std::process::{Command, Output};

fn rmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmt")).args(args).output().expect("spawn rmt")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn sample_spectrum_plot_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("gue.txt");
    let s = dir.path().join("gue.csv");
    let svg = dir.path().join("gue.svg");
    let out = rmt(&["sample", "--ensemble", "gue", "--n", "200", "--seed", "7", "--out", p(&m)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let header = std::fs::read_to_string(&m).unwrap();
    assert!(header.starts_with("rmt-matrix v1 200 200 complex\n"));

    let scale = (1.0 / 200f64.sqrt()).to_string();
    let out = rmt(&["spectrum", "--in", p(&m), "--scale", &scale, "--out", p(&s)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&s).unwrap();
    assert!(csv.starts_with("index,value\n"));
    assert_eq!(csv.lines().count(), 201);

    let out = rmt(&["plot", "hist", "--in", p(&s), "--overlay", "semicircle", "--bins", "25", "--out", p(&svg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<rect").count(), 25);
    assert_eq!(text.matches("<path").count(), 1);
}

#[test]
fn same_seed_same_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = rmt(&["sample", "--ensemble", "ginibre-complex", "--n", "20", "--seed", "3", "--out", p(path)]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn haar_scatter_two_panels() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("haar.txt");
    let s = dir.path().join("haar.csv");
    let svg = dir.path().join("haar.svg");
    assert!(rmt(&["sample", "--ensemble", "haar", "--n", "80", "--seed", "1", "--out", p(&m)]).status.success());
    assert!(rmt(&["spectrum", "--in", p(&m), "--out", p(&s)]).status.success());
    let out = rmt(&["plot", "scatter", "--in", p(&s), "--in", p(&s), "--overlay", "disc", "--out", p(&svg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 160);
    assert_eq!(text.matches("<ellipse").count(), 2);
}

#[test]
fn wishart_and_single_ring_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("w.txt");
    assert!(rmt(&["sample", "--ensemble", "wishart", "--n", "40", "--p", "10", "--out", p(&m)]).status.success());
    assert!(std::fs::read_to_string(&m).unwrap().starts_with("rmt-matrix v1 10 10 real"));

    let prof = dir.path().join("profile.csv");
    std::fs::write(&prof, "sigma\n1,2,3\n4\n").unwrap();
    let r = dir.path().join("ring.txt");
    let out = rmt(&["sample", "--ensemble", "single-ring", "--n", "4", "--profile", p(&prof), "--out", p(&r)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sv = dir.path().join("sv.csv");
    assert!(rmt(&["spectrum", "--in", p(&r), "--singular", "--out", p(&sv)]).status.success());
    let text = std::fs::read_to_string(&sv).unwrap();
    let vals: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for (v, want) in vals.iter().zip([1.0, 2.0, 3.0, 4.0]) {
        assert!((v - want).abs() < 1e-10, "{v}");
    }

    let out = rmt(&["sample", "--ensemble", "single-ring", "--n", "5", "--profile", p(&prof), "--out", p(&r)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn laws_dump_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("mp.csv");
    let out = rmt(&["laws", "dump", "--law", "mp:0.25", "--grid", "64", "--out", p(&out_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,density,cdf");
    assert_eq!(lines.len(), 65);
    let last: Vec<f64> = lines[64].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[0] - 2.25).abs() < 1e-12);
    assert!((last[2] - 1.0).abs() < 1e-10);
    assert_eq!(rmt(&["laws", "dump", "--law", "disc", "--out", p(&out_path)]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = rmt(&[
        "--threads", "1", "verify", "mp", "--alpha", "0.25", "--n", "200", "--trials", "2", "--seed", "11",
        "--report", p(&report), "--csv", p(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["schema"], "rmt-report/1");
    assert_eq!(json["records"].as_array().unwrap().len(), 2);
    assert_eq!(json["passed"], true);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("record,label,size,trial,stream,value,relation,threshold,pass"));

    // n = 20 is far from the limit law at KS 0.05
    let out = rmt(&["verify", "semicircle", "--n", "20", "--trials", "2", "--report", p(&report)]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], false);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    assert_eq!(rmt(&["verify", "nope", "--trials", "1", "--report", p(&report)]).status.code(), Some(2));
    assert_eq!(rmt(&["verify", "tw", "--n", "4000", "--trials", "1", "--report", p(&report)]).status.code(), Some(2));
    assert_eq!(rmt(&["sample", "--ensemble", "gue"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    let out = rmt(&["spectrum", "--in", p(&missing), "--out", p(&report)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
}
