use std::path::Path;
use std::process::{Command, Output};

fn binae(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binae")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    let out = binae(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep-sparsity", "--trials", "12", "--seed", "5", "--format", "csv"];
    let one = run_to(dir.path(), "a.csv", &[&args[..], &["--workers", "1"]].concat());
    let four = run_to(dir.path(), "b.csv", &[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one, four);
    let seeded = run_to(dir.path(), "c.csv", &["sweep-sparsity", "--trials", "12", "--seed", "6"]);
    assert_ne!(one, seeded);
}

#[test]
fn csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = run_to(dir.path(), "t.csv", &["sweep-ratio", "--model", "kwta", "--trials", "3"]);
    let text = String::from_utf8(bytes).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ratio,model,statistic,mean,std,trials"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8 * 3);
    for r in &rows {
        assert_eq!(r.len(), 6);
        assert_eq!(r[1], "kwta");
        assert_eq!(r[5], "3");
        let mean: f64 = r[3].parse().unwrap();
        let digits = r[3].trim_start_matches(['-', '0', '.']).chars().filter(char::is_ascii_digit).count();
        assert!(digits <= 6, "{}", r[3]);
        assert!(mean.is_finite() && r[4].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn json_document_shape() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = run_to(dir.path(), "t.json", &["attractor-census", "--model", "kwta", "--trials", "2"]);
    let doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    for key in ["config", "rows", "runtime_seconds", "version"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["config"]["experiment"], "attractor-census");
    assert_eq!(doc["config"]["trials"], 2);
    let rows = doc["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert_eq!(rows[0]["model"], "kwta");
    assert!(doc["runtime_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn stdout_carries_the_table_without_out() {
    let out = binae(&["sweep-ax", "--model", "threshold", "--trials", "2", "--nx", "10", "--ax", "4", "--aw", "5", "--ny", "30"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("a_x,model,statistic,mean,std,trials\n"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("rows in"));
}

#[test]
fn exit_codes() {
    assert_eq!(binae(&["no-such-experiment"]).status.code(), Some(2));
    assert_eq!(binae(&["sweep-ax", "--ax", "0"]).status.code(), Some(2));
    assert_eq!(binae(&["sweep-ax", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(binae(&["mi-curve", "--nx", "40"]).status.code(), Some(2));
    assert_eq!(binae(&["threshold-approx", "--model", "kwta"]).status.code(), Some(2));
    assert_eq!(binae(&["sweep-ax", "--format", "xml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("t.csv");
    let out = binae(&["sweep-ratio", "--trials", "1", "--model", "kwta", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
