use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const K5_MINUS_E: &str =
    r#"{"vertices":[0,1,2,3,4],"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsecirc"))
        .args(args)
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_k5_minus_e() {
    let v = json_of(&run(&["check", K5_MINUS_E]));
    assert_eq!(v["is_circuit"], true);
    assert_eq!(v["is_sparse"], false);
    assert_eq!(v["connectivity"]["three_connected"], true);
    assert_eq!(v["node_census"]["nodes"], serde_json::json!([3, 4]));
    let oracle = json_of(&run(&["check", "--oracle", K5_MINUS_E]));
    assert_eq!(oracle["is_circuit"], true);
}

#[test]
fn check_with_other_sparsity_parameters() {
    // K4 is (2,3)-tight.
    let k4 = r#"{"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
    let v = json_of(&run(&["check", "--k", "2", "--l", "3", k4]));
    assert_eq!(v["is_tight"], false);
    let v = json_of(&run(&["check", "--k", "2", "--l", "2", k4]));
    assert_eq!(v["is_sparse"], true);
}

#[test]
fn check_reads_graph6_and_multigraphs() {
    // K5 in graph6.
    let v = json_of(&run(&["check", "D~{"]));
    assert_eq!(v["edges"], 10);
    assert_eq!(v["is_circuit"], false);
    let triple = r#"{"edges":[[0,1]],"multiplicity":{"0-1":3}}"#;
    let v = json_of(&run(&["check", triple]));
    assert_eq!(v["simple"], false);
    assert_eq!(v["is_multicircuit"], true);
}

#[test]
fn generate_decompose_build_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let generated = json_of(&run(&["generate", "--n", "14", "--seed", "9"]));
    let graph_path = dir.path().join("g.json");
    fs::write(&graph_path, generated["graph"].to_string()).unwrap();

    let trace_path = dir.path().join("trace.json");
    let out = run(&[
        "decompose",
        graph_path.to_str().unwrap(),
        "--out",
        trace_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());

    let rebuilt = json_of(&run(&["build", trace_path.to_str().unwrap()]));
    let rebuilt_path = dir.path().join("h.json");
    fs::write(&rebuilt_path, rebuilt.to_string()).unwrap();
    let v = json_of(&run(&[
        "check",
        graph_path.to_str().unwrap(),
        "--iso",
        rebuilt_path.to_str().unwrap(),
    ]));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["is_circuit"], true);
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "--n", "11", "--seed", "4"]);
    let b = run(&["generate", "--n", "11", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let default_seed = run(&["generate", "--n", "11"]);
    assert_eq!(default_seed.stdout, run(&["generate", "--n", "11"]).stdout);
}

#[test]
fn enumerate_small() {
    let v = json_of(&run(&["enumerate", "--n", "5"]));
    assert_eq!(v["count"], 1);
    let v = json_of(&run(&["enumerate", "--n", "6"]));
    assert_eq!(v["count"], 5);
}

#[test]
fn components_of_two_glued_circuits() {
    // Two copies of K5\e sharing vertex 4.
    let g = r#"{"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],
        [4,5],[4,6],[4,7],[4,8],[5,6],[5,7],[5,8],[6,7],[6,8]]}"#;
    let v = json_of(&run(&["components", g]));
    assert_eq!(
        v["matroid_components"]["partition"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    assert_eq!(v["rm_connected"], false);
    assert_eq!(v["redundantly_rigid"], true);
    let oracle = json_of(&run(&["components", "--oracle", g]));
    assert_eq!(oracle["matroid_components"], v["matroid_components"]);
}

#[test]
fn rank_report() {
    let v = json_of(&run(&["rank", K5_MINUS_E, "--seed", "3"]));
    assert_eq!(v["agrees"], true);
    assert_eq!(v["combinatorial_rank"], 8);
    assert_eq!(v["numeric_rank"], 8);
}

#[test]
fn exit_codes() {
    let parse = run(&["check", "{\"edges\": [[0,1]"]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(!parse.stderr.is_empty());

    let not_circuit = run(&["decompose", r#"{"edges":[[0,1],[1,2]]}"#]);
    assert_eq!(not_circuit.status.code(), Some(2));

    let small = run(&["rank", r#"{"edges":[[0,1]]}"#]);
    assert_eq!(small.status.code(), Some(2));

    let dangling = r#"{"leaves":[{"component":0,"base":"K5minusE"}],
        "steps":[{"kind":"Henneberg2","params":{"u":0,"w":1,"z":3,"v":9},"left":4,"out":4}]}"#;
    let out = run(&["build", dangling]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let h2 = r#"{"leaves":[{"component":0,"base":"K5minusE"}],
        "steps":[{"kind":"Henneberg2","params":{"u":0,"w":1,"z":3,"v":9},"left":0,"out":0}]}"#;
    let built = json_of(&run(&["build", h2]));
    assert_eq!(built["vertices"].as_array().unwrap().len(), 6);
}
