use std::process::Command;

use serde_json::Value;
use sigma_tensor::cli;
use sigma_tensor::io::{parse_json, tensor_from_json};
use sigma_tensor::tensor::Tensor;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("sigma-tensor").chain(args.iter().copied()).map(std::ffi::OsString::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    parse_json(&out).unwrap()
}

#[test]
fn hadamard_with_identity_is_entrywise_product() {
    let v = json(&["hadamard", "--sigma", "(1)(2)", "--matrices", "[[[1,2],[3,4]],[[5,6],[7,8]]]"]);
    let t = tensor_from_json(&v).unwrap();
    // entry (i1,i2) = H1[i1,i1] H2[i2,i2]
    assert_eq!(t.data(), &[5.0, 8.0, 20.0, 32.0]);
}

#[test]
fn emitted_tensors_round_trip_bit_exactly() {
    let v = json(&["conjugate", "--u", "[[0.6,-0.8],[0.8,0.6]]", "--tensor", "[[0.1,0.7],[1e-300,3.3333]]"]);
    let t = tensor_from_json(&v).unwrap();
    let again = json(&["conjugate", "--u", "[[1,0],[0,1]]", "--tensor", &v.to_string()]);
    assert_eq!(tensor_from_json(&again).unwrap(), t);
}

#[test]
fn spectral_commands() {
    let g = tensor_from_json(&json(&["grad", "--f", "trace", "--matrix", "[[2,1],[1,3]]"])).unwrap();
    assert!(g.max_abs_diff(&Tensor::identity(2)).unwrap() < 1e-12);
    let h = json(&["hess", "--f", "fro2", "--matrix", "[[2,1],[1,3]]", "--e1", "[[1,0],[0,0]]", "--e2", "[[1,0],[0,0]]"]);
    assert!((h["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let t = tensor_from_json(&json(&["hess-tensor", "--f", "fro2", "--matrix", "[[2,0],[0,1]]"])).unwrap();
    assert_eq!(t.order(), 4);
    let e = json(&["eig", "--matrix", "[[1,0],[0,3]]"]);
    assert_eq!(e["lambda"], serde_json::json!([3.0, 1.0]));
}

#[test]
fn precedes_and_project() {
    assert_eq!(json(&["precedes", "--mu", "(123)", "--sigma", "(12)"])["precedes"], true);
    assert_eq!(json(&["precedes", "--mu", "(12)", "--sigma", "(123)"])["precedes"], false);
    let t = tensor_from_json(&json(&["project", "--mu", "(12)", "--tensor", "[[1,2],[3,4]]"])).unwrap();
    assert_eq!(t.data(), &[1.0, 0.0, 0.0, 4.0]);
    let part = r#"{"n": 2, "blocks": [[1, 2]]}"#;
    let t = tensor_from_json(&json(&["project", "--mu", "(12)", "--tensor", "[[1,2],[3,4]]", "--partition", part])).unwrap();
    assert_eq!(t.data(), &[1.0, 2.0, 3.0, 4.0]);
}

#[test]
fn arguments_can_be_files_and_output_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.json");
    std::fs::write(&input, "[[4,0],[0,9]]").unwrap();
    let output = dir.path().join("out.json");
    let (code, stdout, _) = run(&["eig", "--matrix", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v = parse_json(&std::fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(v["lambda"], serde_json::json!([9.0, 4.0]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["eig"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, _, err) = run(&["eig", "--matrix", "[[1,2],[3"]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(run(&["precedes", "--mu", "(11)", "--sigma", "(1)"]).0, 3);
    assert_eq!(run(&["eig", "--matrix", "[[1,2],[3,4]]"]).0, 4);
    assert_eq!(run(&["conjugate", "--u", "[[1,1],[0,1]]", "--tensor", "[1,2]"]).0, 0);
    assert_eq!(run(&["diag-sigma", "--sigma", "(12)", "--tensor", "[1,2]"]).0, 3);
    assert_eq!(run(&["conjugate", "--u", "[[1,0,0],[0,1,0],[0,0,1]]", "--tensor", "[1,2]"]).0, 4);
    assert_eq!(run(&["grad", "--f", "logbarrier", "--matrix", "[[-1,0],[0,1]]"]).0, 4);
    assert_eq!(run(&["grad", "--f", "nope", "--matrix", "[[1]]"]).0, 2);
    assert_eq!(run(&["hess", "--f", "fro2", "--matrix", "[[1,0],[0,1]]", "--e1", "[[1,0],[0,0]]", "--e2", "[[1,0],[0,0]]"]).0, 5);
    assert_eq!(run(&["verify", "norm", "--k", "9"]).0, 2);
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["verify", "transfer", "--trials", "3", "--seed", "5"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let v = parse_json(&a.1).unwrap();
    assert_eq!(v["cases_failed"], 0);
    assert!(v.get("elapsed_ms").is_none());
    let timed = parse_json(&run(&["verify", "norm", "--trials", "2", "--timing"]).1).unwrap();
    assert!(timed["elapsed_ms"].is_number());
}

#[test]
fn binary_matches_in_process_run() {
    let args = ["precedes", "--mu", "(123)", "--sigma", "(13)"];
    let out = Command::new(env!("CARGO_BIN_EXE_sigma-tensor")).args(args).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(&args).1);
}
