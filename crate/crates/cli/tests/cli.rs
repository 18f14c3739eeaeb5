use std::path::Path;
use std::process::{Command, Output};

const QUICK: &str = r#"{
  "dynamics": {"periods": 3, "steps_per_period": 20},
  "ensemble": {"m": 4},
  "sampling": {"n_samples": 4}
}"#;

fn qlsync(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qlsync"));
    cmd.args(args).env_remove("QLSYNC_SEED");
    if let Some(s) = seed {
        cmd.env("QLSYNC_SEED", s);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", QUICK);
    let out = dir.path().join("out");
    let o = qlsync(
        &[
            "run",
            "--config",
            &cfg,
            "--out-dir",
            out.to_str().unwrap(),
            "--svg",
            "--workers",
            "2",
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("run.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("t,order_re,order_mod,purity,"));
    assert!(out.join("run.json").exists());
    assert!(std::fs::read_to_string(out.join("run.svg"))
        .unwrap()
        .contains("<polyline"));
}

#[test]
fn seed_variable_overrides_base_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", QUICK);
    let csv_for = |seed: Option<&str>, sub: &str| {
        let out = dir.path().join(sub);
        let o = qlsync(
            &["run", "--config", &cfg, "--out-dir", out.to_str().unwrap()],
            seed,
        );
        assert!(o.status.success());
        std::fs::read_to_string(out.join("run.csv")).unwrap()
    };
    let a = csv_for(Some("17"), "a");
    let b = csv_for(Some("17"), "b");
    let c = csv_for(None, "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
    let json = std::fs::read_to_string(dir.path().join("a/run.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["config"]["ensemble"]["base_seed"], 17);
    assert_eq!(
        qlsync(&["run", "--config", &cfg], Some("abc"))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"ensemble": {"m": 0}}"#);
    let o = qlsync(&["run", "--config", &bad], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ensemble.m"));

    let unknown = write(dir.path(), "unknown.json", r#"{"graph": {"nodes": 3}}"#);
    assert_eq!(
        qlsync(&["run", "--config", &unknown], None).status.code(),
        Some(2)
    );

    let missing = dir.path().join("nope.json");
    assert_eq!(
        qlsync(&["run", "--config", missing.to_str().unwrap()], None)
            .status
            .code(),
        Some(4)
    );

    // no finite concentration is that narrow
    let too_narrow = write(
        dir.path(),
        "narrow.json",
        r#"{"dynamics": {"init": {"kind": "von_mises", "circ_std": 1e-40, "mu": 0}, "periods": 1}, "ensemble": {"m": 2}}"#,
    );
    let o = qlsync(
        &[
            "run",
            "--config",
            &too_narrow,
            "--out-dir",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let blocker = write(dir.path(), "blocker", "x");
    let o = qlsync(
        &[
            "run",
            "--config",
            &write(dir.path(), "q.json", QUICK),
            "--out-dir",
            &blocker,
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_prints_one_row_per_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", QUICK);
    let o = qlsync(&["sweep", "--config", &cfg, "--K", "0,100,400"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "K,final_order_re,final_order_mod,final_purity");
    assert_eq!(rows.len(), 4);
    assert!(rows[2].starts_with("100,"));
}

#[test]
fn graph_dump_reports_spectrum_and_gap() {
    let dir = tempfile::tempdir().unwrap();
    let cycle = write(
        dir.path(),
        "c4.json",
        r#"{"n": 4, "edges": [[0,1,1,0],[1,2,1,0],[2,3,1,0],[3,0,1,0]]}"#,
    );
    let o = qlsync(&["graph", "--spec", &cycle, "--dump"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ev: Vec<f64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (got, want) in ev.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!((v["spectral_gap"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let scenario = write(dir.path(), "s.json", "{}");
    let o = qlsync(&["graph", "--spec", &scenario], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 256);
}
