use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitmetric"))
        .args(args)
        .env_remove("ORBITMETRIC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SIGN2: &str = r#"{"kind":"sign","d":2}"#;

#[test]
fn distance_under_sign_group() {
    let o = run(&["distance", "--group", SIGN2, "--x", "1,0", "--y", "0,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "distance 1.41421356, maxfilter 0");
    let o = run(&["distance", "--group", SIGN2, "--x", "1,-2", "--y", "-1,2"]);
    assert_eq!(stdout(&o).trim(), "distance 0, maxfilter 5");
}

#[test]
fn input_errors_exit_with_two() {
    let o = run(&["distance", "--group", SIGN2, "--x", "1,0,0", "--y", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["distance", "--group", r#"{"kind":"nope"}"#, "--x", "1", "--y", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["probe", "--map", r#"{"family":"projective","d":2}"#, "--radii", "1e-2,1e-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn failed_certificate_exits_with_one() {
    let ok = run(&["verify-dual", "--cycle", "4", "--c", "1.4142135623730951", "--expect-optimal"]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("optimal true"));
    let bad = run(&["verify-dual", "--cycle", "4", "--c", "1.3", "--expect-optimal"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn cycle_table_matches_formula() {
    let o = run(&["cycle-table", "--n", "4,6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cols: Vec<f64> = row.split_whitespace().skip(1).map(|c| c.parse().unwrap()).collect();
        assert!((cols[0] - cols[1]).abs() < 1e-4);
    }
    assert_eq!(run(&["cycle-table", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn scatter_is_reproducible_single_threaded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = run(&[
            "figure-scatter",
            "--family",
            "projective-normalized",
            "--samples",
            "2000",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 2001);
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let ratio = v[1] / v[0];
        assert!((1.0 - 1e-9..=2f64.sqrt() + 1e-9).contains(&ratio));
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let with_flag = run(&["lower-bound", "--rounds", "5", "--seed", "3"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_orbitmetric"))
        .args(["lower-bound", "--rounds", "5"])
        .env("ORBITMETRIC_SEED", "3")
        .output()
        .unwrap();
    assert!(with_flag.status.success());
    assert_eq!(with_flag.stdout, with_env.stdout);
}

#[test]
fn empty_scatter_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.csv");
    let o = run(&["figure-scatter", "--family", "projective-raw", "--samples", "0", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "pairs 0");
    assert_eq!(fs::read_to_string(&p).unwrap().lines().count(), 1);
}

#[test]
fn sdp_certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (primal, dual) = (dir.path().join("p.json"), dir.path().join("d.json"));
    let o = run(&[
        "sdp",
        "--cycle",
        "6",
        "--out",
        primal.to_str().unwrap(),
        "--dual-out",
        dual.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let p: Value = serde_json::from_str(&fs::read_to_string(&primal).unwrap()).unwrap();
    assert!((p["t"].as_f64().unwrap().sqrt() - 1.5).abs() < 1e-4);
    assert_eq!(p["Q"].as_array().unwrap().len(), 6);
    let o = run(&["verify-dual", "--cycle", "6", "--dual", dual.to_str().unwrap(), "--c", "1.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dataset_commands() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.json");
    fs::write(
        &data,
        r#"{"group":{"kind":"sign","d":2},"points":[[1,0],[0,1],[-1,0.1],[3,3],[-3,-2.9],[0.2,-1]]}"#,
    )
    .unwrap();
    let map = r#"{"family":"projective","d":2}"#;
    let d = data.to_str().unwrap();

    let o = run(&["ann", "--data", d, "--map", map, "--query", "-0.9,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("index "));

    let o = run(&["kmeans", "--data", d, "--map", map, "--k", "2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let labels = v["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 6);
    assert_eq!(labels[3], labels[4]);
    assert_eq!(labels[0], labels[2]);

    let o = run(&["mds", "--data", d, "--map", map, "--k", "2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coords"].as_array().unwrap().len(), 6);
    assert_eq!(v["error"]["holds"], Value::Bool(true));

    let o = run(&["embed", "--map", map, "--data", d]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
    assert_eq!(run(&["kmeans", "--data", d, "--map", map, "--k", "9"]).status.code(), Some(2));
}

#[test]
fn probe_csv_layout() {
    let o = run(&["probe", "--map", r#"{"family":"projective_raw","d":2}"#, "--radii", "1e-1,1e-2,1e-3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("radius,min_ratio"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for w in rows.windows(2) {
        assert!((w[0][1] / w[1][1] - 10.0).abs() < 1.0);
    }
}

#[test]
fn bispectrum_of_shifted_signal_agrees() {
    let a = run(&["bispectrum", "--real", "1,2,3,4"]);
    let b = run(&["bispectrum", "--real", "4,1,2,3"]);
    let (va, vb): (Value, Value) =
        (serde_json::from_str(&stdout(&a)).unwrap(), serde_json::from_str(&stdout(&b)).unwrap());
    let flat = |v: &Value| -> Vec<f64> {
        fn walk(v: &Value, out: &mut Vec<f64>) {
            match v {
                Value::Array(xs) => xs.iter().for_each(|x| walk(x, out)),
                Value::Number(n) => out.push(n.as_f64().unwrap()),
                Value::Object(m) => m.values().for_each(|x| walk(x, out)),
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(v, &mut out);
        out
    };
    let (fa, fb) = (flat(&va), flat(&vb));
    assert_eq!(fa.len(), fb.len());
    assert!(!fa.is_empty());
    assert!(fa.iter().zip(&fb).all(|(x, y)| (x - y).abs() < 1e-9));
}
