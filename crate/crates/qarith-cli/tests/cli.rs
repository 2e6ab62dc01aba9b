use std::collections::BTreeSet;
use std::path::PathBuf;

use qarith_cli::{run, sidecar_path};

fn qarith(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qarith").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qarith-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_families() {
    for family in ["adder", "subtractor", "addsub", "cond-adder", "multiplier", "divider", "qft", "shear", "toffoli", "fredkin"] {
        let (code, out, err) = qarith(&["verify", family, "--n", "3"]);
        assert_eq!(code, 0, "{family}: {out}{err}");
        assert!(out.contains(" 0 failures"), "{out}");
    }
    let (code, _, err) = qarith(&["verify", "multiplier", "--n", "11"]);
    assert_eq!(code, 2);
    assert!(err.contains("sweep limit"), "{err}");
}

#[test]
fn adder_metrics_json() {
    let (code, out, _) = qarith(&["metrics", "adder", "--n", "4", "--convention", "serial", "--format", "json"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["t_count"], 56);
    assert_eq!(json["kq_t"], 240);
    assert_eq!(json["garbage_count"], 0);
    assert_eq!(json["convention"], "serial");
    let keys: BTreeSet<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    let expect: BTreeSet<&str> = [
        "t_count", "t_depth", "cnot_count", "cnot_depth", "total_depth", "qubit_cost", "ancilla_count",
        "garbage_count", "kq", "kq_t", "kq_cnot", "fidelity_A", "family", "n", "convention",
    ]
    .into();
    assert_eq!(keys, expect);
}

#[test]
fn qft_metrics() {
    let (code, out, _) = qarith(&["metrics", "qft", "--n", "2"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["t_count"], 0);
    let (code, _, err) = qarith(&["metrics", "qft", "--n", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("not exactly Clifford+T synthesizable"), "{err}");
}

#[test]
fn nisq_verdict() {
    let (_, out, _) = qarith(&["metrics", "toffoli", "--epsilon", "0.5"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(json["nisq_verdict"].is_string());
    let (code, _, _) = qarith(&["metrics", "toffoli", "--epsilon", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qarith(&[]).0, 2);
    assert_eq!(qarith(&["frobnicate"]).0, 2);
    assert_eq!(qarith(&["build", "adder"]).0, 2);
    assert_eq!(qarith(&["build", "widget", "--n", "2"]).0, 2);
    assert_eq!(qarith(&["metrics", "/no/such/file.qasm"]).0, 2);
    assert_eq!(qarith(&["--help"]).0, 0);
}

#[test]
fn sidecar_determines_garbage() {
    let dir = scratch("sidecar");
    let file = dir.join("sub.qasm");
    let path = file.to_str().unwrap();
    assert_eq!(qarith(&["build", "subtractor", "--n", "2", "--out", path]).0, 0);
    assert!(sidecar_path(&file).exists());
    let (_, out, _) = qarith(&["metrics", path]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["garbage_count"], 0);

    std::fs::remove_file(sidecar_path(&file)).unwrap();
    let (_, out, _) = qarith(&["metrics", path]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["garbage_count"], "undetermined");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn lower_and_simulate() {
    let dir = scratch("lower");
    let file = dir.join("tof.qasm");
    let path = file.to_str().unwrap();
    qarith(&["build", "toffoli", "--out", path]);
    let (code, lowered, _) = qarith(&["lower", path]);
    assert_eq!(code, 0);
    let t = lowered.lines().filter(|l| l.starts_with("t ") || l.starts_with("tdg ")).count();
    assert_eq!(t, 7);
    assert!(!lowered.contains("ccx"));

    let low = dir.join("low.qasm");
    std::fs::write(&low, &lowered).unwrap();
    let (_, out, _) = qarith(&["simulate", low.to_str().unwrap(), "--input", "110"]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("111 +1.000000000000"), "{out}");
    let (_, out, _) = qarith(&["simulate", path, "--input", "110"]);
    assert_eq!(out.trim(), "111");

    let state = dir.join("state.json");
    std::fs::write(&state, "[[0.6,0],[0,0],[0,0],[0.8,0],[0,0],[0,0],[0,0],[0,0]]").unwrap();
    let (code, out, _) = qarith(&["simulate", path, "--state", state.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("111 +0.8"), "{out}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seeded_shots_are_reproducible() {
    let dir = scratch("shots");
    let file = dir.join("qft.qasm");
    let path = file.to_str().unwrap();
    qarith(&["build", "qft", "--n", "2", "--out", path]);
    let args = ["simulate", path, "--input", "00", "--shots", "1000", "--seed", "9"];
    let (code, a, _) = qarith(&args);
    assert_eq!(code, 0);
    assert_eq!(qarith(&args).1, a);
    let json: serde_json::Value = serde_json::from_str(&a).unwrap();
    let total: u64 = json["counts"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 1000);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rotate_pgm() {
    let dir = scratch("rotate");
    let input = dir.join("in.pgm");
    let output = dir.join("out.pgm");
    let pixels: Vec<String> = (0..64).map(|v| (v * 4).to_string()).collect();
    std::fs::write(&input, format!("P2\n8 8\n255\n{}\n", pixels.join(" "))).unwrap();
    let args = [
        "rotate", "--size", "8", "--theta", "-30", "--frac", "8",
        "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap(),
    ];
    assert_eq!(qarith(&args).0, 0);
    let text = std::fs::read_to_string(&output).unwrap();
    let grid = qarith::io::read_pgm(&text).unwrap();
    let mut values = grid.pixels().to_vec();
    values.sort_unstable();
    assert_eq!(values, (0..64).map(|v| v * 4).collect::<Vec<u32>>());
    assert_eq!(qarith(&["rotate", "--size", "16", "--theta", "30", "--in", input.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn build_is_deterministic() {
    let a = qarith(&["build", "divider", "--n", "4"]).1;
    assert_eq!(a, qarith(&["build", "divider", "--n", "4"]).1);
    assert!(a.starts_with("OPENQASM 2.0;"));
}
