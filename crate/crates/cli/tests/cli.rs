use std::process::{Command, Output};

use serde_json::Value;

fn mzvwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzvwb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn relations_listing() {
    let out = mzvwb(&["relations", "--max-weight", "4"]);
    assert!(out.status.success());
    let rels = json(&out);
    let stuffle = rels
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["product"] == "stuffle")
        .unwrap();
    assert_eq!(stuffle["left"], serde_json::json!([2]));
    let rhs = stuffle["rhs"].as_array().unwrap();
    assert!(rhs.contains(&serde_json::json!({"term": [2, 2], "coeff": 2})));
    assert!(rhs.contains(&serde_json::json!({"term": [4], "coeff": 1})));

    let tsv = mzvwb(&["relations", "--max-weight", "4", "--format", "tsv"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.contains("stuffle\t(2)\t(2)\t2*(2,2) + 1*(4)"));
    assert_eq!(text.lines().count(), 3);

    let bad = mzvwb(&["relations", "--max-weight", "99"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_batches() {
    let out = mzvwb(&["verify", "--max-weight", "6", "--tol", "1e-5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 failed"));

    let tight = mzvwb(&["verify", "--max-weight", "4", "--tol", "1e-8"]);
    assert!(tight.status.success());
    assert_eq!(json(&tight)["summary"]["passed"], 2);

    assert_eq!(mzvwb(&["verify", "--tol", "1e-12"]).status.code(), Some(2));
}

#[test]
fn verify_reports_a_corrupted_relation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rels.json");
    let text = r#"[
        {"product": "stuffle", "left": [2], "right": [2],
         "rhs": [{"term": [2, 2], "coeff": 1}, {"term": [4], "coeff": 1}]},
        {"product": "stuffle", "left": [2], "right": [2],
         "rhs": [{"term": [2, 2], "coeff": 2}, {"term": [4], "coeff": 1}]}
    ]"#;
    std::fs::write(&path, text).unwrap();
    let out = mzvwb(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["summary"]["passed"], 1);
    assert_eq!(v["summary"]["failed"], 1);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_missing_file_names_the_path() {
    let out = mzvwb(&["verify", "/nonexistent/rels.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/rels.json"));
}

#[test]
fn cartier_subcommand() {
    let out = mzvwb(&["cartier", "2", "/", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["summand_count"], 3);
    assert_eq!(v["exact"], true);

    let out = mzvwb(&["cartier", "2,1 / 2,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["summand_count"], 13);
    assert_eq!(v["exact"], true);

    let out = mzvwb(&["cartier", "1,2", "/", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not admissible"));
}

#[test]
fn strata_subcommand() {
    let out = mzvwb(&["strata", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    let nodes = v["poset"]["nodes"].as_array().unwrap();
    let minimal: Vec<&Value> = nodes.iter().filter(|n| n["rank"] == 0).collect();
    assert_eq!(minimal.len(), 1);
    assert_eq!(minimal[0]["label"], "x1 = 1, x2 = 1");
    assert!(v["dot"].as_str().unwrap().starts_with("digraph"));

    let out = mzvwb(&["strata", "3", "--samples", "1000", "--seed", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["clearance"]["all_pass"], true);
    assert_eq!(v["schedule"]["flags_valid"], true);

    assert_eq!(mzvwb(&["strata", "5"]).status.code(), Some(2));
}

#[test]
fn strata_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("artifacts");
    let out = mzvwb(&["strata", "3", "--samples", "50", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    for name in ["poset.dot", "poset.json", "schedule.json", "clearance.json"] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    let dot = std::fs::read_to_string(out_dir.join("poset.dot")).unwrap();
    assert!(dot.contains("->"));
}

#[test]
fn output_is_deterministic() {
    let args = ["strata", "3", "--samples", "200", "--seed", "3"];
    assert_eq!(mzvwb(&args).stdout, mzvwb(&args).stdout);
    let args = ["verify", "--max-weight", "5", "--format", "tsv"];
    let a = mzvwb(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_mzvwb"))
        .args(args)
        .env("MZVWB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_mzvwb"))
        .args(["relations", "--max-weight", "4"])
        .env("MZVWB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coords_check_passes() {
    let out = mzvwb(&["coords-check", "--max-weight", "6", "--samples", "100", "--seed", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["pullback"][0]["sign"], -1);
}
