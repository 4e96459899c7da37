use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qunip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qunip")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    qunip(args).status.code().expect("exit code")
}

#[test]
fn dcb_of_zero_is_the_unit() {
    let v = json_of(&qunip(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "0,0,0"]));
    assert_eq!(v["basis"], "dual_pbw");
    let coords = v["coords"].as_array().unwrap();
    assert_eq!(coords.len(), 1);
    assert_eq!(coords[0]["c"], serde_json::json!([0, 0, 0]));
    assert_eq!(coords[0]["coeff"], "(1)/(1)");
}

#[test]
fn gram_dimensions_match_kostant_counts() {
    let v = json_of(&qunip(&["gram", "--type", "A2", "--height", "4"]));
    assert_eq!(v["all_match"], true);
    let rows = v["weights"].as_array().unwrap();
    let ranks: Vec<u64> = rows.iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 1, 1, 2, 1, 1, 2, 2, 1, 1, 2, 3, 2, 1]);
    for r in rows {
        assert_eq!(r["rank"], r["pbw_count"]);
    }
}

#[test]
fn gram_reads_datum_files_and_prints_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b2.json");
    fs::write(&path, r#"{"cartan": [[2, -1], [-2, 2]], "symmetrizers": [2, 1]}"#).unwrap();
    let v = json_of(&qunip(&["gram", "--datum-file", path.to_str().unwrap(), "--height", "3", "--matrices"]));
    assert_eq!(v["all_match"], true);
    let row = &v["weights"].as_array().unwrap()[3];
    assert_eq!(row["degree"], serde_json::json!([1, 1]));
    assert_eq!(row["gram"].as_array().unwrap().len(), 2);
}

#[test]
fn minors_report_passes_for_a2() {
    let out =
        qunip(&["minors", "--type", "A2", "--word", "1,2,1", "--degree", "3", "--check-qcommute", "--check-factor"]);
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["strong_compatibility"]["checked"], 19);
    assert_eq!(v["qcommute"]["measured"], v["lambda_matrix"]);
    assert_eq!(v["extremal"].as_array().unwrap().len(), 4);
}

#[test]
fn seed_records() {
    let v = json_of(&qunip(&["seed", "--type", "A2", "--word", "1,2,1"]));
    assert_eq!(v["frozen"], serde_json::json!([2, 3]));
    assert_eq!(v["minors"].as_array().unwrap().len(), 3);
    assert!(v["exchange_matrix"].is_null());
    let a1 = json_of(&qunip(&["seed", "--type", "A1", "--word", "1"]));
    assert_eq!(a1["frozen"], serde_json::json!([1]));
    assert_eq!(a1["lambda_matrix"], serde_json::json!([[0]]));
    let a3 = json_of(&qunip(&["seed", "--type", "A3", "--word", "1,2,1,3,2,1"]));
    assert_eq!(a3["frozen"], serde_json::json!([4, 5, 6]));
}

#[test]
fn pbw_and_root_vectors() {
    let v = json_of(&qunip(&["rootvec", "--type", "A2", "--word", "1,2,1", "--k", "1"]));
    assert_eq!(v["terms"], serde_json::json!([{"word": [1], "coeff": "(1)/(1)"}]));
    let v = json_of(&qunip(&["rootvec", "--type", "A2", "--word", "1,2,1", "--k", "2"]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    let v = json_of(&qunip(&["pbw", "--type", "A2", "--word", "1,2,1", "--c", "1,0,1"]));
    assert!(!v["terms"].as_array().unwrap().is_empty());
}

#[test]
fn straighten_product_and_compat() {
    let v = json_of(&qunip(&["straighten", "--type", "A2", "--word", "1,2,1", "--j", "1", "--k", "3"]));
    let support: Vec<&Value> = v["coords"].as_array().unwrap().iter().map(|r| &r["c"]).collect();
    assert_eq!(support, vec![&serde_json::json!([0, 1, 0])]);
    let v = json_of(&qunip(&["compat", "--type", "A2", "--word", "1,2,1", "--c1", "1,0,0", "--c2", "0,0,1"]));
    assert_eq!(v["compatible"], false);
    let v = json_of(&qunip(&["compat", "--type", "A2", "--word", "1,2,1", "--c1", "1,0,0", "--c2", "1,0,0"]));
    assert_eq!(v["compatible"], true);
    assert_eq!(v["leading"]["c"], serde_json::json!([2, 0, 0]));
    let v = json_of(&qunip(&["product", "--type", "A2", "--word", "1,2,1", "--c1", "1,0,0", "--c2", "0,0,1"]));
    assert_eq!(v["coords"].as_array().unwrap().len(), 2);
}

#[test]
fn crystal_operators() {
    let v = json_of(&qunip(&["crystal", "--type", "A2", "--word", "1,2,1", "--ops", "f1,f1,e1"]));
    assert_eq!(v["result"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["eps"], serde_json::json!([1, 0]));
    let v = json_of(&qunip(&["crystal", "--type", "A2", "--word", "1,2,1", "--ops", "e2"]));
    assert!(v["result"].is_null());
}

#[test]
fn output_is_deterministic_and_tables_render() {
    let args = ["dcb", "--type", "B2", "--word", "1,2,1,2", "--c", "1,1,1,1"];
    assert_eq!(qunip(&args).stdout, qunip(&args).stdout);
    let out = qunip(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "1,1,1", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(1,1,1)\t(1)/(1)"), "{text}");
}

#[test]
fn cache_hits_and_recovers_from_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["dcb", "--type", "A2", "--word", "1,2,1", "--c", "1,1,1", "--cache", cache.to_str().unwrap()];
    let first = qunip(&args);
    assert!(first.status.success());
    let entries: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let second = qunip(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(second.stderr.is_empty());

    let text = fs::read_to_string(&entries[0]).unwrap();
    fs::write(&entries[0], text.replacen("(1)/(1)", "(2)/(1)", 1)).unwrap();
    let third = qunip(&args);
    assert_eq!(first.stdout, third.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("corrupt"));
    let fourth = qunip(&args);
    assert!(fourth.stderr.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["dcb", "--type", "A2", "--c", "0,0"]), 2);
    assert_eq!(code(&["dcb", "--word", "1", "--c", "0"]), 2);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "0,0,0", "--sign", "0"]), 2);
    assert_eq!(code(&["gram", "--type", "A2", "--height", "0"]), 2);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,1", "--c", "0,0"]), 3);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,3", "--c", "0,0"]), 3);
    assert_eq!(code(&["dcb", "--type", "Q7", "--word", "1", "--c", "0"]), 3);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "0,0"]), 3);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "a,b,c"]), 3);
    assert_eq!(code(&["seed", "--type", "A2", "--word", "1,2,1", "--sign", "+1"]), 3);
    assert_eq!(code(&["rootvec", "--type", "A2", "--word", "1,2,1", "--k", "4"]), 3);
    assert_eq!(code(&["straighten", "--type", "A2", "--word", "1,2,1", "--j", "3", "--k", "1"]), 3);
    assert_eq!(code(&["crystal", "--type", "A2", "--word", "1,2,1", "--ops", "g1"]), 3);
    assert_eq!(code(&["crystal", "--type", "A1~", "--word", "1,2"]), 3);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "5,0,5", "--height", "4"]), 4);
    assert_eq!(code(&["dcb", "--type", "A2", "--word", "1,2,1", "--c", "0,0,0"]), 0);
}
