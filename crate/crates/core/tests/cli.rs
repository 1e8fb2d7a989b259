//! End-to-end checks of the `sap` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sap")).args(args).output().expect("spawn sap")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "random", "--servers", "20", "--clients", "50", "--degree", "3", "--seed", "7"];
    let (a, b) = (sap(&args), sap(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = sap(&["gen", "random", "--servers", "20", "--clients", "50", "--degree", "3", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn adversary_has_l_squared_clients() {
    let out = sap(&["gen", "adversary", "--L", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("client")).count(), 16);
    assert_eq!(text.lines().next(), Some("servers 4"));
    let big = stdout(&sap(&["gen", "adversary", "--L", "8"]));
    assert_eq!(big.lines().filter(|l| l.starts_with("client")).count(), 64);

    let padded = sap(&["gen", "adversary", "--L", "4", "--pad", "40"]);
    assert_eq!(stdout(&padded).lines().filter(|l| l.starts_with("client")).count(), 40);
    assert_eq!(sap(&["gen", "adversary", "--L", "4", "--pad", "20"]).status.code(), Some(2));
}

#[test]
fn run_writes_one_row_per_arrival() {
    let inst = stdout(&sap(&["gen", "star-chain", "--depth", "4"]));
    let path = temp_file("chain.txt", &inst);
    let arrivals = inst.lines().filter(|l| l.starts_with("client")).count();
    for engine in ["naive", "fast", "minmax"] {
        let out = sap(&["run", path.to_str().unwrap(), "--engine", engine, "--analyze"]);
        assert!(out.status.success(), "{engine}: {}", String::from_utf8_lossy(&out.stderr));
        let text = stdout(&out);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("arrival,client,matched,path_edges"));
        assert_eq!(lines.count(), arrivals);
    }
    let semi = sap(&["run", path.to_str().unwrap(), "--engine", "semi", "--epsilon", "1/2"]);
    assert!(semi.status.success());
    let bad = sap(&["run", path.to_str().unwrap(), "--engine", "naive", "--epsilon", "1/2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fast_run_respects_depth() {
    let inst = stdout(&sap(&["gen", "star-chain", "--depth", "4"]));
    let path = temp_file("chain-h.txt", &inst);
    let out = sap(&["run", path.to_str().unwrap(), "--engine", "fast", "--h", "2"]);
    assert!(out.status.success());
    let lengths: Vec<String> = stdout(&out).lines().skip(1).map(|l| l.split(',').nth(3).unwrap().to_string()).collect();
    assert_eq!(lengths.last().map(String::as_str), Some("7"));
}

#[test]
fn verify_small_suite_passes() {
    let out = sap(&["verify", "--suite", "small"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_single_file() {
    let path = temp_file("complete.txt", &stdout(&sap(&["gen", "complete", "--clients", "6", "--servers", "3"])));
    let out = sap(&["verify", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn malformed_input_is_an_error() {
    let path = temp_file("bad.txt", "servers 2\nclient 0 9\n");
    let out = sap(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(sap(&["run", "/nonexistent/instance.txt"]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let out = sap(&["bench", "--sizes", "16,32", "--seeds", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(text.lines().next().unwrap().contains("total_replacements"));
}
