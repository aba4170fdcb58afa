use std::path::Path;
use std::process::{Command, Output};

fn lcdgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcdgraph")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = lcdgraph(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_stats_with_the_process() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let w = dir.path().join("w.txt");
    ok(&[
        "gen",
        "--n",
        "400",
        "--m",
        "2",
        "--method",
        "exp",
        "--seed",
        "7",
        "--out",
        path(&g),
        "--process-out",
        path(&w),
    ]);
    let first = std::fs::read_to_string(&g).unwrap();
    assert!(first.starts_with("400 2 exp 7\n"));
    let s = json(&["stats", "--in", path(&g), "--process", path(&w)]);
    assert_eq!(s["n"], 400);
    assert_eq!(s["degree_report"]["j_n"], 6);
    assert!(s["degree_report"]["l1"].as_f64().unwrap() >= 0.0);
    let csv = ok(&["stats", "--in", path(&g), "--report", "csv"]);
    assert!(csv.starts_with("n,m,method,seed,loops,"));
    // Same seed, same file.
    let again = dir.path().join("g2.txt");
    ok(&["gen", "--n", "400", "--m", "2", "--method", "exp", "--seed", "7", "--out", path(&again)]);
    assert_eq!(first, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn degree_report_without_process_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["gen", "--n", "50", "--method", "seq", "--seed", "1", "--out", path(&g)]);
    let out = lcdgraph(&["gen", "--n", "50", "--method", "seq", "--seed", "1", "--process-out", path(&g)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported method"));
    let out = lcdgraph(&["gen", "--n", "50", "--method", "bogus", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn maxtree_reports_root_and_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["gen", "--n", "200", "--method", "uniform", "--seed", "3", "--out", path(&g)]);
    let v = json(&["maxtree", "--in", path(&g), "--root", "1", "--mu", "3"]);
    let sizes: u64 = v["forest"]["sizes"].as_array().unwrap().iter().map(|s| s.as_u64().unwrap()).sum();
    assert_eq!(sizes, 200);
    assert!(v["root"]["size"].as_u64().unwrap() >= 1);
    assert!(v["prefix_maxtree"]["present"].is_boolean());
}

#[test]
fn bounds_subcommands() {
    let z = json(&["bounds", "zsigma", "--sigma", "0.75"]);
    assert!((z["z"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-10);
    let c = json(&["bounds", "connect", "--n", "2", "--m", "1", "--exact"]);
    assert_eq!(c["exact"], "2/3");
    let t = ok(&[
        "bounds",
        "example2",
        "--m",
        "500",
        "--rho",
        "1",
        "--eps",
        "0.6",
        "--x",
        "0.02,0.2,0.45",
        "--table",
        "csv",
    ]);
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines[0], "x,k1,k2");
    assert_eq!(lines.len(), 4);
    let th = json(&["bounds", "example1", "--m", "16", "--eps", "0.857142857142857"]);
    assert!(!th["zeros_1"].as_array().unwrap().is_empty());
    assert!(!th["zeros_2"].as_array().unwrap().is_empty());
    let rows = json(&["bounds", "example1", "--m", "16", "--eps", "0.857142857142857", "--beta", "0.492,0.43"]);
    assert!(rows[0]["j1"].as_f64().unwrap() > 0.0);
    assert!(rows[1]["j2"].as_f64().unwrap() > 0.0);
    let mix = json(&["bounds", "mixture", "--r", "2", "--delta", "-0.5", "--x", "0.1,0.5"]);
    assert_eq!(mix["moments"].as_array().unwrap().len(), 4);
    let pb = json(&["bounds", "pairbound", "--n", "1000", "--m", "20", "--mu", "100", "--nu", "200", "--eps", "0.5"]);
    assert!(pb["pair"]["ln"].as_f64().unwrap() < 0.0);
    let x3 = json(&["bounds", "example3", "--m", "100", "--gamma", "1", "--eps", "0.6"]);
    let x = x3["x_m2"].as_f64().unwrap();
    assert!(x > 0.15 && x < 0.16);
}

#[test]
fn oracle_prints_the_exact_law() {
    let v = json(&["oracle", "--n", "2", "--m", "1", "--statistic", "loop_count", "--format", "json"]);
    assert_eq!(v["total"], 3);
    let probs: Vec<&str> =
        v["entries"].as_array().unwrap().iter().map(|e| e["probability"].as_str().unwrap()).collect();
    assert_eq!(probs, vec!["2/3", "1/3"]);
    let text = ok(&["oracle", "--n", "3", "--statistic", "connected"]);
    assert!(text.contains("1\t8/15"));
    let out = lcdgraph(&["oracle", "--n", "10", "--statistic", "loop_count"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}

#[test]
fn mc_writes_reports_and_sets_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"name": "good", "seed": 5, "runs": 50,
            "grid": [{"n": [20], "m": [1], "methods": ["seq"]}],
            "statistics": {"P": {"kind": "parallel_pairs"}},
            "tests": [{"kind": "exact_value", "statistic": "P", "value": 0}]}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let o = lcdgraph(&["mc", "--config", path(&good), "--out", path(&out_dir), "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("good.json")).unwrap()).unwrap();
    assert_eq!(report["provenance"]["seed"], 5);
    assert_eq!(report["passed"], true);
    assert!(out_dir.join("good.csv").exists());

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name": "bad", "seed": 5, "runs": 50,
            "grid": [{"n": [20], "m": [1], "methods": ["seq"]}],
            "statistics": {"L": {"kind": "loop_count"}},
            "tests": [{"kind": "exact_value", "statistic": "L", "value": 0}]}"#,
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lcdgraph"))
        .args(["mc", "--config", path(&bad), "--out", path(&out_dir)])
        .env("LCDGRAPH_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL exact_value"));

    let typo = dir.path().join("typo.json");
    std::fs::write(&typo, r#"{"name": "t", "seed": 1, "runs": 1, "rnus": 2}"#).unwrap();
    let o = lcdgraph(&["mc", "--config", path(&typo), "--out", path(&out_dir)]);
    assert_eq!(o.status.code(), Some(2));
}
