use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dirspec(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirspec")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn cf_rows() {
    let d = tmp();
    let o = dirspec(&["cf", "(sqrt 2)", "--n", "10"], d.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    let n3: Vec<&str> = rows[3].split(',').collect();
    assert_eq!(n3[2], "12");
    let p: f64 = n3[4].parse().unwrap();
    assert!((p - 29.0 * (17.0 - 12.0 * 2f64.sqrt())).abs() < 1e-9);

    let o = dirspec(&["cf", "(/ (+ 1 (sqrt 5)) 2)", "--n", "30"], d.path());
    let text = stdout(&o);
    let last: f64 = text.lines().last().unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!((last - (5.0 + 5f64.sqrt()) / 10.0).abs() < 1e-6);
}

#[test]
fn best2_chain() {
    let d = tmp();
    let o = dirspec(&["best2", "(sqrt 2)", "(sqrt 3)", "--qmax", "10"], d.path());
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let qs: Vec<&str> = lines.iter().filter_map(|v| v["q"].as_str()).collect();
    assert_eq!(qs, ["1", "3", "7"]);
    let s = &lines.last().unwrap()["summary"];
    assert!(s["max_product_approx"].as_f64().unwrap() <= 2.0 / 3f64.sqrt());
    assert_eq!(s["below_2_over_sqrt3"], Value::Bool(true));
}

#[test]
fn input_errors_exit_3() {
    let d = tmp();
    assert_eq!(dirspec(&["cf", "bogus"], d.path()).status.code(), Some(3));
    assert_eq!(dirspec(&["best2", "1/2", "(sqrt 3)", "--qmax", "0"], d.path()).status.code(), Some(3));
    assert_eq!(dirspec(&["construct", "--lambda", "2", "--halfwidth", "1/20", "--n", "2"], d.path()).status.code(), Some(3));
    assert_eq!(dirspec(&["construct", "--lambda", "1", "--halfwidth", "1/20", "--n", "2", "--branch", "zz"], d.path()).status.code(), Some(3));
    assert_eq!(dirspec(&["verify", "missing.json"], d.path()).status.code(), Some(3));
}

#[test]
fn construct_verify_round_trip() {
    let d = tmp();
    let args = ["construct", "--lambda", "1/2", "--halfwidth", "1/20", "--n", "6", "--branch", "0x00", "--out", "a.json", "--certs", "a.jsonl"];
    assert!(dirspec(&args, d.path()).status.success());
    let mut again = args;
    again[10] = "b.json";
    again[12] = "b.jsonl";
    assert!(dirspec(&again, d.path()).status.success());
    let read = |f: &str| std::fs::read(d.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.jsonl"), read("b.jsonl"));

    let o = dirspec(&["verify", "a.json"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS"));
    assert_eq!(dirspec(&["verify", "a.json", "--depth", "5"], d.path()).status.code(), Some(2));

    let mut bundle: Value = serde_json::from_slice(&read("a.json")).unwrap();
    bundle["certificates"][2]["V_over_pi"][1] = Value::String("1/3".into());
    std::fs::write(d.path().join("bad.json"), bundle.to_string()).unwrap();
    let o = dirspec(&["verify", "bad.json"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn branch_flip_changes_v6() {
    let d = tmp();
    let run = |bits: &str, out: &str| {
        let o = dirspec(&["construct", "--lambda", "1", "--halfwidth", "1/20", "--n", "6", "--branch", bits, "--out", out], d.path());
        assert!(o.status.success());
        let v: Value = serde_json::from_slice(&std::fs::read(d.path().join(out)).unwrap()).unwrap();
        v["v"].clone()
    };
    assert_ne!(run("0x00", "a.json"), run("0x08", "b.json"));
}

#[test]
fn small_lambda_products() {
    let d = tmp();
    let o = dirspec(&["construct", "--lambda", "0", "--halfwidth", "1/100", "--n", "8", "--out", "r.json"], d.path());
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(d.path().join("r.json")).unwrap()).unwrap();
    for c in v["certificates"].as_array().unwrap() {
        let last = c["V_over_pi"].as_array().unwrap().last().unwrap().as_str().unwrap();
        let (n, q) = last.split_once('/').unwrap();
        let (n, q): (f64, f64) = (n.parse().unwrap(), q.parse().unwrap());
        assert!(n / q > 0.0 && n / q < 0.01);
    }
}

#[test]
fn exhaustion_exit_2() {
    let d = tmp();
    let o = dirspec(&["construct", "--lambda", "1", "--halfwidth", "1/20", "--n", "4", "--qmax", "100"], d.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_reproducible() {
    let d = tmp();
    let a = dirspec(&["sample", "--count", "20", "--qmax", "5000", "--seed", "4"], d.path());
    let b = dirspec(&["sample", "--count", "20", "--qmax", "5000", "--seed", "4"], d.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("certified_below_4/pi=true"));
}
