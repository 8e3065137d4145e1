use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultrashift")).args(args).output().expect("spawn ultrashift")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn column(csv: &str, k: usize) -> Vec<String> {
    csv.lines().skip(1).map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn gen_examples() {
    let o = run(&["gen", "--family", "block", "--horizon", "5"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("n,w_n,log2_wn"));
    assert_eq!(column(&s, 1), ["2", "1", "0.5", "2", "2"]);
    assert_eq!(column(&s, 2), ["1", "0", "-1", "1", "1"]);

    let s = stdout(&run(&["gen", "--family", "diamond", "--horizon", "16"]));
    let ws = column(&s, 1);
    assert_eq!(ws.len(), 16);
    assert!(ws.iter().all(|w| w == "2" || w == "0.25"));

    let s = stdout(&run(&["gen", "--family", "literal", "--values", "2", "--tail", "repeat", "--horizon", "3"]));
    assert_eq!(column(&s, 1), ["2", "2", "2"]);

    let s = stdout(&run(&["gen", "--family", "literal", "--values", "1.5,1/3", "--horizon", "3"]));
    assert_eq!(column(&s, 1)[2], "1");
    assert!(column(&s, 2)[0].starts_with("0.58"));
}

#[test]
fn classify_examples() {
    let base = ["classify", "--horizon", "20000", "--imax", "2000"];
    let summary = |extra: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        let o = run(&a);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert_eq!(v["schema"], 1);
        v["summary"].clone()
    };
    let b = summary(&["--family", "block", "--nk", "block"]);
    assert_eq!(b["hypercyclic"], "EvidenceFor");
    assert_eq!(b["mixing"], "EvidenceAgainst");
    assert_eq!(b["ultra_hypercyclic"], "EvidenceFor");

    let d = summary(&["--family", "diamond", "--checks", "strong_sufficient,ultra,mixing"]);
    assert_eq!(d["strong_sufficient"], "EvidenceFor");
    assert_eq!(d["ultra_hypercyclic"], "EvidenceAgainst");
    assert_eq!(d["mixing"], "EvidenceAgainst");

    let c = summary(&["--family", "literal", "--values", "1", "--checks", "hypercyclic"]);
    assert_eq!(c["hypercyclic"], "EvidenceAgainst");
}

#[test]
fn classify_reports_carry_witnesses() {
    let o = run(&["classify", "--family", "diamond", "--horizon", "5000", "--imax", "500", "--checks", "ultra"]);
    let v = json(&o);
    let r = &v["reports"][0];
    assert_eq!(r["exact"], true);
    let w = r["witnesses"].as_array().unwrap();
    assert!(w.iter().any(|w| w["role"] == "reciprocal_square"));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--family", "diamond"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["reports"][0]["checks"].as_array().unwrap().iter().all(|c| c["failed"] == 0));

    let o = run(&["verify", "--family", "block", "--kmax", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["verify", "--family", "literal", "--values", "2,0.7,1.3", "--tail", "repeat", "--horizon", "3000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_flags_corrupted_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let o = run(&["gen", "--family", "diamond", "--horizon", "400000", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    // w_42 is 1/4; make it 2
    let text = fs::read_to_string(&path).unwrap().replacen("\n42,0.25,-2\n", "\n42,2,1\n", 1);
    fs::write(&path, text).unwrap();
    let o = run(&["verify", "--family", "literal", "--values-file", path.to_str().unwrap(), "--suite", "diamond"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pair_reciprocal"));
    let v = json(&o);
    let witnesses = v["reports"][0]["witnesses"].as_array().unwrap();
    assert!(witnesses.iter().any(|w| w["kind"] == "identity" && w["args"] == serde_json::json!([21])));
}

fn write_vector(dir: &Path, body: &str) -> String {
    let p = dir.join("x.json");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn orbit_examples() {
    let dir = tempfile::tempdir().unwrap();
    let e0 = write_vector(dir.path(), r#"{"space":"l2","entries":[[0,1.0]]}"#);
    let s = stdout(&run(&["orbit", "--family", "block", "--vector", &e0, "--horizon", "3000"]));
    assert_eq!(column(&s, 1), ["0.25", "0.125", "0.0625", "0.03125", "0.015625"]);
    let s = stdout(&run(&["orbit", "--family", "diamond", "--vector", &e0, "--horizon", "400"]));
    assert_eq!(column(&s, 0), ["1", "5", "21", "85", "341"]);
    assert_eq!(column(&s, 1), ["0.5", "0.25", "0.125", "0.0625", "0.03125"]);
    let zero = write_vector(dir.path(), r#"{"space":"c0","entries":[]}"#);
    let s = stdout(&run(&["orbit", "--family", "block", "--vector", &zero, "--horizon", "3000"]));
    assert!(column(&s, 1).iter().all(|v| v == "0.0" || v == "0"));
}

#[test]
fn scan_examples() {
    let s = stdout(&run(&["scan", "--family", "block", "--horizon", "500", "--imax", "50"]));
    let zeros: Vec<String> = s.lines().skip(1).filter(|l| l.split(',').nth(1) == Some("0")).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(zeros, ["3", "17", "83", "439"]);

    let s = stdout(&run(&["scan", "--family", "diamond", "--horizon", "1400", "--imax", "10"]));
    assert!(s.lines().any(|l| l.starts_with("1365,6,")));

    let s = stdout(&run(&["scan", "--family", "literal", "--values", "2", "--tail", "repeat", "--horizon", "40", "--imax", "5"]));
    for l in s.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[0], f[1]);
        assert_eq!(f[0], f[2]);
        assert_eq!(f[3], "1");
    }
}

#[test]
fn witness_build_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["witness", "--family", "diamond", "--kind", "uh", "--horizon", "3000", "--imax", "600"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["provenance"], "ultra_blocker");
    assert_eq!(v["selection"]["pairs"], serde_json::json!([[2, 1], [6, 5], [22, 21], [54, 85]]));
    let path = dir.path().join("w.json");
    fs::write(&path, &o.stdout).unwrap();
    let o = run(&["verify", "--family", "diamond", "--witness", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["witness_replay"]["verified"], true);
    // replaying against another sequence fails
    let o = run(&["verify", "--family", "block", "--witness", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["witness", "--family", "block", "--kind", "uh", "--horizon", "30000", "--imax", "3000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no admissible pairs"));

    let o = run(&["witness", "--family", "diamond", "--kind", "sh", "--space", "l1", "--n", "20", "--imax", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precondition"));
}

#[test]
fn config_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "horizon = 8\n[sequence]\nfamily = \"literal\"\nvalues = [2, \"1/4\"]\ntail = \"repeat\"\n").unwrap();
    let o = run(&["gen", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(column(&stdout(&o), 1), ["2", "0.25", "2", "0.25", "2", "0.25", "2", "0.25"]);
    // flags win over the file
    let o = run(&["gen", "--config", cfg.to_str().unwrap(), "--horizon", "2"]);
    assert_eq!(stdout(&o).lines().count(), 3);

    fs::write(&cfg, "horizon = 8\ncolour = \"blue\"\n").unwrap();
    assert_eq!(run(&["gen", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));
    fs::write(&cfg, "command = \"scan\"\n").unwrap();
    assert_eq!(run(&["gen", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));

    assert_eq!(run(&["gen", "--family", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["gen", "--bogus"]).status.code(), Some(2));
    let o = run(&["verify", "--family", "diamond", "--horizon", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_round_trip_reproduces_reports() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["block", "diamond"] {
        let csv = dir.path().join(format!("{family}.csv"));
        let csv = csv.to_str().unwrap();
        assert!(run(&["gen", "--family", family, "--horizon", "3000", "--out", csv]).status.success());
        let common = ["--horizon", "3000", "--imax", "300", "--nk", family, "--checks", "all"];
        let mut a = vec!["classify", "--family", family];
        a.extend(common);
        let mut b = vec!["classify", "--family", "literal", "--values-file", csv];
        b.extend(common);
        let (a, b) = (json(&run(&a)), json(&run(&b)));
        assert_eq!(a["reports"], b["reports"], "{family}");
        assert_eq!(a["sequence"]["horizon"], b["sequence"]["horizon"]);
    }
}
