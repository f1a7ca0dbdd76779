use std::process::Command;

use serde_json::Value;

fn qc(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_qc")).args(args).output().expect("qc runs");
    let code = out.status.code().expect("exit code");
    let text = String::from_utf8(out.stdout).unwrap();
    let json = if text.trim().is_empty() { Value::Null } else { serde_json::from_str(&text).expect("stdout is JSON") };
    (code, json)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn hull_in_z4() {
    let (code, r) = qc(&["hull", "--group", "Z4", "--set", "(1)"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&r["result"]["hull"]), ["(0)", "(1)", "(3)"]);
    assert_eq!(r["command"], "hull");
    assert_eq!(r["conventions"]["t_plus"], "closed arc [-1/4, 1/4]");
    assert!(r["bound"].is_null());
}

#[test]
fn polar_and_dense_in_z8() {
    let (code, r) = qc(&["polar", "--group", "Z8", "--set", "(0),(1),(2)"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&r["result"]["polar"]), ["(0)", "(1)", "(7)"]);
    let (code, r) = qc(&["dense", "--group", "Z8", "--set", "(0),(1),(2)"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["dense"], false);
    assert_eq!(r["result"]["counterexample"], "(1)");
    let (code, r) = qc(&["dense", "--group", "Z4", "--set", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificates"].as_array().unwrap().len(), 3);
}

#[test]
fn dense_on_a_model_reports_its_bound() {
    let (code, r) = qc(&["dense", "--model", "T", "--set", "1/2,1/4,1/6", "--char-bound", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["bound"], "3");
    let (code, r) = qc(&["dense", "--model", "T", "--set", "1/3", "--char-bound", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["counterexample"], "-3");
}

#[test]
fn torus_witnesses() {
    let (code, r) = qc(&["witness", "torus", "--seq-len", "1000", "--char-bound", "1000"]);
    assert_eq!(code, 0);
    let certs = r["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2000);
    assert!(certs.iter().all(|c| c["value"] != "0"));
    assert_eq!(r["result"]["constructive_witnesses"], 2000);
}

#[test]
fn zp_qhat_and_fan_witnesses() {
    let (code, r) = qc(&["witness", "zp", "--prime", "3", "--levels", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificates"].as_array().unwrap().len(), 26);
    let (code, r) = qc(&["witness", "qhat", "--seq-len", "6", "--prime-max", "5", "--levels", "2", "--height", "6"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificates"][0]["witness"]["t"], "1/2");
    let (code, _) = qc(&["witness", "qhat", "--seq-len", "3", "--prime-max", "5", "--levels", "2", "--height", "6"]);
    assert_eq!(code, 2);
    let (code, r) =
        qc(&["witness", "fan", "--model", "prod(T,Zp(2))", "--seq-len", "8", "--levels", "3", "--char-bound", "3"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["verified"], true);
}

#[test]
fn set_operations() {
    let (code, r) = qc(&["wset", "--group", "Z8", "--set", "1", "--arc", "1/8"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["trivial"], true);
    let (_, r) = qc(&["sumset", "--group", "Z8", "--set", "1", "--n", "2"]);
    assert_eq!(strings(&r["result"]["sumset"]), ["(0)", "(1)", "(2)"]);
    let (code, r) = qc(&["min-sumset", "--group", "Z8", "--set", "1", "--arc", "1/8"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["n"], 3);
    let (code, r) = qc(&["min-sumset", "--group", "Z8", "--set", "1", "--arc", "1/2"]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("precondition"));
}

#[test]
fn fan_three_space_and_near_char() {
    let (code, r) = qc(&["fan", "--group", "Z4xZ3", "--set", "1,2", "--set", "1"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&r["result"]["fan"]), ["(0,0)", "(0,1)", "(1,0)", "(2,0)"]);
    let (code, _) = qc(&["fan", "--group", "Z4xZ3", "--set", "1", "--set", "1"]);
    assert_eq!(code, 1);
    let hom = r#"{"source":"Z4","target":"Z2","matrix":[[1]]}"#;
    let (code, r) = qc(&["three-space", "--hom", hom, "--set", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["holds"], true);
    let (code, _) = qc(&["three-space", "--hom", r#"{"source":"Z4","target":"Z3","matrix":[[1]]}"#]);
    assert_eq!(code, 2);
    let (code, r) = qc(&["near-char", "--group", "Z4", "--set", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["injective"], false);
}

#[test]
fn determination() {
    let (code, _) = qc(&["determine", "--group", "Z12", "--set", "0,6"]);
    assert_eq!(code, 1);
    let (code, _) = qc(&["determine", "--group", "Z12", "--set", "0,5"]);
    assert_eq!(code, 2);
    let (code, r) = qc(&["determine", "--model", "Zp(3)", "--set", "1,2,3,6,0", "--char-bound", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["positive"], true);
    let (code, r) = qc(&["determine", "--model", "T", "--set", "0", "--gens", "1/2", "--char-bound", "2"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["counterexample"], "-2");
}

#[test]
fn pipelines_and_search() {
    let (code, r) = qc(&["build-seq", "--group", "Z4xZ3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["sequence"].as_array().unwrap().len(), 4);
    let (code, r) = qc(&["build-seq", "--model", "prod(T,Zp(3))", "--seq-len", "20", "--levels", "3", "--char-bound", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verified"], true);
    let (_, r) = qc(&["search", "min-dense", "--group", "Z4"]);
    assert_eq!(strings(&r["result"]["subsets"]), ["(1),(2)", "(2),(3)"]);
    let (code, _) = qc(&["search", "min-dense", "--group", "Z24"]);
    assert_eq!(code, 2);
    let (code, r) = qc(&["search", "min-dense", "--group", "Z24", "--heuristic"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["exhaustive"], false);
}

#[test]
fn experiment_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let (code, r) = qc(&[
        "experiment", "theorem1", "--dim", "2", "--set", "(1/6,0),(0,1/10)", "--arc", "1/4", "--schedule", "10,100",
        "--csv", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["rows"][0]["count"], 99);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "M,count,fraction");
    assert!(lines[1].starts_with("10,99,"));
    assert!(lines[2].starts_with("100,9999,"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qc(&["hull", "--group", "Q4", "--set", "1"]).0, 2);
    assert_eq!(qc(&["hull", "--group", "Z4", "--set", "(1,2)"]).0, 2);
    assert_eq!(qc(&["wset", "--group", "Z4", "--set", "1", "--arc", "3/4"]).0, 2);
    assert_eq!(qc(&["frobnicate"]).0, 2);
    assert_eq!(qc(&["dense", "--model", "Zp(4)", "--set", "1"]).0, 2);
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_are_deterministic() {
    let args = ["witness", "zp", "--prime", "5", "--levels", "3"];
    let (_, a) = qc(&args);
    let (_, b) = qc(&["--threads", "1", "witness", "zp", "--prime", "5", "--levels", "3"]);
    assert_eq!(without_timing(a), without_timing(b));
    let args = ["search", "min-dense", "--group", "Z2xZ6"];
    assert_eq!(without_timing(qc(&args).1), without_timing(qc(&args).1));
}

#[test]
fn echoed_inputs_round_trip() {
    let (_, first) = qc(&["hull", "--group", " Z4 ", "--set", "(5), 2 ,(2)"]);
    let inputs = &first["inputs"];
    let (group, set) = (inputs["group"].as_str().unwrap(), inputs["set"].as_str().unwrap());
    assert_eq!((group, set), ("Z4", "(1),(2)"));
    let (_, second) = qc(&["hull", "--group", group, "--set", set]);
    assert_eq!(second["inputs"], first["inputs"]);
    assert_eq!(second["result"], first["result"]);

    let (_, first) = qc(&["dense", "--model", "prod(T, Zp(3))", "--set", "(3/2, 4)", "--char-bound", "1"]);
    let inputs = &first["inputs"];
    let (model, set) = (inputs["model"].as_str().unwrap(), inputs["set"].as_str().unwrap());
    assert_eq!((model, set), ("prod(T,Zp(3))", "(1/2,4)"));
    let (_, second) = qc(&["dense", "--model", model, "--set", set, "--char-bound", "1"]);
    assert_eq!(second["inputs"], first["inputs"]);
}
