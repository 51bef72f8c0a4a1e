//! End-to-end tests of the `threshold-spectra` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threshold-spectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn construct_k2_csv() {
    let out = run(&["construct", "01", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "0.0000000000000000e0,1.0000000000000000e0");
    assert_eq!(lines[1], "1.0000000000000000e0,0.0000000000000000e0");
}

#[test]
fn construct_single_vertex_is_zero_matrix() {
    let out = run(&["construct", "0", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.0000000000000000e0");
}

#[test]
fn construct_json_includes_weights() {
    let out = run(&["construct", "0^2 1^3 0^2 1^2", "--lambda", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["n"], 9);
    assert_eq!(doc["r"], 4);
    assert_eq!(doc["matrix"]["rows"].as_array().unwrap().len(), 9);
    assert_eq!(doc["weights"]["eps_cross"].as_array().unwrap().len(), 4);
}

#[test]
fn construct_out_writes_matrix_and_weight_dump() {
    let dir = std::env::temp_dir().join(format!("threshold-spectra-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.csv");
    let out = run(&["construct", "0 1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("0.0000000000000000e0,1.0000000000000000e0"));
    let weights = std::fs::read_to_string(dir.join("m.csv.weights.json")).unwrap();
    assert!(weights.contains("\"eps_cross\""));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reduce_emits_the_chain() {
    let out = run(&["reduce", "0 1 0 1 0 1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let chain = doc["chain"].as_array().unwrap();
    let coeffs: Vec<&str> = chain.iter().map(|x| x["a_num"].as_str().unwrap()).collect();
    assert_eq!(coeffs, vec!["-1", "1", "2", "0", "-1"]);
    assert_eq!(doc["final_singleton"]["a_num"], "1");
    assert_eq!(doc["spectrum"]["-1"], 2);
    assert_eq!(doc["spectrum"]["1"], 2);
    assert_eq!(doc["spectrum"]["0"], 1);
    assert_eq!(doc["spectrum"]["2"], 1);
}

#[test]
fn reduce_nine_vertex_counts() {
    let out = run(&["reduce", "0^2 1^3 0^2 1^2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["isolated_zero_count"], 2);
    assert_eq!(doc["isolated_lambda_count"], 3);
    assert_eq!(doc["chain"].as_array().unwrap().len(), 3);
    assert_eq!(doc["spectrum"]["1"], 4);
}

#[test]
fn verify_passes_and_reports() {
    let out = run(&["verify", "0^3 1 0^2 1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["distinct_count"], 4);
    assert_eq!(doc["pattern_ok"], true);
    assert_eq!(doc["spectrum_ok"], true);
    assert_eq!(doc["numeric_eigenvalues"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_with_scaled_lambda() {
    let out = run(&["verify", "0^2 1^3 0^2 1^2", "--lambda", "-2.5"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes() {
    // 2: parse errors.
    assert_eq!(run(&["construct", "10"]).status.code(), Some(2));
    assert_eq!(run(&["construct", ""]).status.code(), Some(2));
    assert_eq!(run(&["verify", "0^x"]).status.code(), Some(2));
    // 3: invalid lambda.
    assert_eq!(run(&["construct", "01", "--lambda", "0"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "01", "--lambda", "0"]).status.code(), Some(3));
}

#[test]
fn sweep_covers_all_sequences() {
    let out = run(&["sweep", "--nmax", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    // Header + 15 rows + summary.
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[0], "n,r,sequence,distinct_count,spectrum_ok,pattern_ok");
    assert!(lines[16].starts_with("summary,max_distinct_count=4,failures=0"));
}

#[test]
fn sweep_n1() {
    let out = run(&["sweep", "--nmax", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(doc["rows"][0]["distinct_count"], 1);
    assert_eq!(doc["failures"], 0);
}

#[test]
fn sweep_n7_contains_a_four_value_witness() {
    let out = run(&["sweep", "--nmax", "7"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 127);
    let witness = rows
        .iter()
        .find(|row| row["sequence"] == "0^3 1^1 0^2 1^1")
        .expect("witness row present");
    assert_eq!(witness["distinct_count"], 4);
    assert_eq!(doc["max_distinct_count"], 4);
    assert_eq!(doc["failures"], 0);
}

#[test]
fn union_of_one_component_is_a_passthrough() {
    let out = run(&["union", "0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["n"], 1);
    assert_eq!(doc["distinct_count"], 1);
}

#[test]
fn union_command() {
    let out = run(&["union", "01", "01"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["n"], 4);
    assert_eq!(doc["distinct_count"], 2);
    assert_eq!(doc["predicted_multiplicities"]["-1"], 2);

    let big = run(&["union", "0^2 1^3 0^2 1^2", "0^3 1 0^2 1"]);
    assert!(big.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&big)).unwrap();
    assert_eq!(doc["n"], 16);
    assert!(doc["distinct_count"].as_u64().unwrap() <= 4);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["construct", "0^2 1^3 0^2 1^2", "--lambda", "0.37"],
        vec!["reduce", "0 1 0 1"],
        vec!["verify", "0^2 1^2", "--lambda", "-2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(stdout(&a), stdout(&b), "args: {:?}", args);
    }
}
