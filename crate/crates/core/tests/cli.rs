use std::process::{Command, Output};

use serde_json::Value;

fn qperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qperm")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn fourier_four_has_one_dimensional_h1() {
    let v = json(&qperm(&["cohomology", "--fourier", "4"]));
    assert_eq!(v["h1dim"], 1);
}

#[test]
fn cohomology_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = qperm(&["cohomology", "--sigma", "(1 2 3)(4 5)", "--out", first.to_str().unwrap()]);
    assert!(out.status.success());
    let second = qperm(&["cohomology", "--input", first.to_str().unwrap()]);
    assert_eq!(std::fs::read(&first).unwrap(), second.stdout);
    assert_eq!(json(&second)["h1dim"], 1);
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let args = ["simulate", "--sigma", "(1 2)(3 4 5)", "--rates", "1.0,0.5", "--t", "1", "--samples", "100000", "--seed", "7"];
    let a = qperm(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_qperm")).args(args).env("QPERM_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["samples"], 100000);
    let row: f64 = v["probs"][0].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((row - 1.0).abs() < 1e-12);
}

#[test]
fn verify_and_semigroup_accept_their_own_output() {
    let dir = tempfile::tempdir().unwrap();
    let triple = dir.path().join("triple.json");
    // ξ = ±1 along the transposition (1 2), zero on the fixed point
    let doc = r#"{"rep":{"n":3,"d":1,"entries":[[[[[0,0]]],[[[1,0]]],[[[0,0]]]],[[[[1,0]]],[[[0,0]]],[[[0,0]]]],[[[[0,0]]],[[[0,0]]],[[[1,0]]]]]},"xs":[[[1,0]],[[1,0]],[[0,0]]]}"#;
    std::fs::write(&triple, doc).unwrap();
    let verified = dir.path().join("verified.json");
    assert!(qperm(&["verify", "--input", triple.to_str().unwrap(), "--out", verified.to_str().unwrap()]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&verified).unwrap()).unwrap();
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["gaussian"], false);
    let again = qperm(&["verify", "--input", verified.to_str().unwrap()]);
    assert_eq!(again.stdout, std::fs::read(&verified).unwrap());

    let sg = json(&qperm(&["semigroup", "--input", verified.to_str().unwrap(), "--time", "0.5,1"]));
    let m = &sg["table"][1]["matrix"];
    let p11 = m[0][0].as_f64().unwrap();
    assert!((p11 - (1.0 + (-2.0f64).exp()) / 2.0).abs() < 1e-12);
    let words = &sg["table"][1]["words"]["p(1,1)"]["value"];
    assert!((words[0].as_f64().unwrap() - p11).abs() < 1e-9);

    let starved = qperm(&["semigroup", "--input", triple.to_str().unwrap(), "--time", "1", "--words", "p(1,2) p(2,1)", "--term-budget", "2"]);
    assert_eq!(starved.status.code(), Some(2));

    let csv = qperm(&["semigroup", "--input", triple.to_str().unwrap(), "--time", "1", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("t,word,re,im,last_term,terms,exp\n"));
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn central_table_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("central.json");
    assert!(qperm(&["central", "--n", "5", "--a", "1", "--atoms", "1:0.5,2:1", "--smax", "4", "--out", first.to_str().unwrap()])
        .status
        .success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    assert_eq!(v["table"][1]["dim"], 4);
    let again = qperm(&["central", "--input", first.to_str().unwrap(), "--smax", "4"]);
    assert_eq!(again.stdout, std::fs::read(&first).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(qperm(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(qperm(&["cohomology", "--fourier", "4", "--bogus"]).status.code(), Some(64));
    assert_eq!(qperm(&["cohomology", "--f4-phi", "4.0"]).status.code(), Some(1));
    assert_eq!(qperm(&["central", "--n", "5", "--atoms", "5:1"]).status.code(), Some(1));
    assert_eq!(qperm(&["cohomology", "--fourier", "3", "--term-budget", "0"]).status.code(), Some(1));
    assert_eq!(qperm(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let out = qperm(&["selftest"]);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 11);
    assert_eq!(String::from_utf8_lossy(&out.stderr).matches("[PASS]").count(), 11);
}
