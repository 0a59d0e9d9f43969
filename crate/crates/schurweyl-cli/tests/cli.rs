//! End-to-end checks of the binary: byte determinism, golden values from the
//! worked examples, and the exit-code contract.

use std::process::Command;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_schurweyl"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn identical_configs_give_byte_identical_output() {
    for args in [
        vec!["prior", "--n", "64", "--d", "2"],
        vec!["minimax", "--d", "3", "--strata", "8", "--pairs", "64"],
        vec!["measure", "--n", "5", "--d", "3", "--p", "0.5,0.3,0.2", "--format", "csv"],
        vec!["bound", "verify", "--instances", "3", "--truncation", "8"],
        vec![
            "redundancy-curve", "--d", "2", "--p", "0.75,0.25", "--n-list", "64,256",
            "--prior", "jeffreys",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}: {:?}", a.status);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_is_independent_of_the_thread_count() {
    // stratified Monte Carlo accumulates per fixed stratum, so the worker
    // pool size must not change a single byte
    let run_with = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_schurweyl"))
            .env("SCHURWEYL_THREADS", threads)
            .args(["minimax", "--d", "3", "--strata", "16", "--pairs", "256"])
            .output()
            .expect("binary runs")
    };
    let one = run_with("1");
    let four = run_with("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn measure_golden_values() {
    let out = run(&["measure", "--n", "2", "--d", "2", "--p", "0.75,0.25", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"(2,0)\",0.8125"), "{text}");
    assert!(text.contains("\"(1,1)\",0.1875"), "{text}");
}

#[test]
fn diagrams_count_golden() {
    let out = run(&["diagrams", "--n", "4", "--d", "2", "--count"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outputs"][0]["value"], 3);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["inputs"]["n"], 4);
}

#[test]
fn minimax_json_reports_published_values() {
    let out = run(&["minimax", "--d", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let get = |name: &str| {
        v["outputs"]
            .as_array()
            .unwrap()
            .iter()
            .find(|o| o["name"] == name)
            .and_then(|o| o["value"].as_f64())
            .unwrap()
    };
    assert!((get("integral_log2") - (-0.50737)).abs() < 5e-4);
    assert!((get("minimax") - (-3.5545)).abs() < 1e-3);
    assert!((get("improvement") - 1.1589).abs() < 1e-3);
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage error
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    // precondition: spectrum does not sum to 1
    let out = run(&["measure", "--n", "2", "--d", "2", "--p", "0.8,0.3"]);
    assert_eq!(out.status.code(), Some(3));
    // precondition: wrong entry count
    let out = run(&["measure", "--n", "2", "--d", "3", "--p", "0.5,0.5"]);
    assert_eq!(out.status.code(), Some(3));
    // budget: unreachable quadrature tolerance
    let out = run(&["minimax", "--d", "2", "--tol", "1e-17"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn isometry_file_workflow() {
    use nalgebra::DMatrix;
    use schurweyl::energybound::{write_isometry, FockSpace, LosslessCode};
    let dir = std::env::temp_dir().join("schurweyl_cli_iso");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("code.bin");
    let fock = FockSpace::new(6).unwrap();
    let code = LosslessCode::random(2, 2, &fock, 99, 1).unwrap();
    let m: &DMatrix<nalgebra::Complex<f64>> = code.isometry();
    write_isometry(&path, m).unwrap();
    let out = run(&[
        "bound",
        "verify",
        "--isometry",
        path.to_str().unwrap(),
        "--n",
        "2",
        "--truncation",
        "6",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let min_margin = v["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["name"] == "min_margin")
        .and_then(|o| o["value"].as_f64())
        .unwrap();
    assert!(min_margin >= -1e-8);
    std::fs::remove_file(&path).ok();
}
