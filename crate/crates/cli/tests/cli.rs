use std::io::Write;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::NamedTempFile;

use raag_cli::{run, unflatten, EXIT_INPUT, EXIT_OK};

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const EDGELESS2: &str = "vertices: a b\n";
const K22: &str = "vertices: a1 a2 b1 b2\nedge: a1 b1\nedge: a1 b2\nedge: a2 b1\nedge: a2 b2\n";
const PATH4: &str = "vertices: a b c d\nedge: a b\nedge: b c\nedge: c d\n";
const EDGE: &str = "{\"vertices\": [\"a\", \"b\"], \"edges\": [[\"a\", \"b\"]]}";

fn json_run(graph: &NamedTempFile, args: &[&str]) -> (i32, Value) {
    let path = graph.path().to_str().unwrap();
    let mut argv = vec!["raag", "--graph", path, "--json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn classify_free_generators_is_essential() {
    let g = graph_file(EDGELESS2);
    let (code, doc) = json_run(&g, &["classify", "a,b"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["command"], "classify");
    assert_eq!(doc["result"]["class"], "ESSENTIAL");
    assert_eq!(doc["result"]["survivors"], json!(["e"]));
    let (_, doc) = json_run(&g, &["classify", "a"]);
    assert_eq!(doc["result"]["class"], "UNSATISFIABLE");
    assert_eq!(doc["certificates"]["annihilator"], "b");
    assert_eq!(doc["certificates"]["annihilator_verified"], true);
}

#[test]
fn ideals_of_complete_bipartite() {
    let g = graph_file(K22);
    let (code, doc) = json_run(&g, &["ideals"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["result"]["count"], 6);
    assert_eq!(doc["result"]["proper_nontrivial"], 4);
    assert_eq!(doc["result"]["hasse"].as_array().unwrap().len(), 6);
    let (code, doc) = json_run(&g, &["ideals", "--max-components", "1"]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(doc["error"]["kind"], "input");
}

#[test]
fn boundary_of_path_has_one_extra_relation() {
    let g = graph_file(PATH4);
    let (code, doc) = json_run(&g, &["boundary"]);
    assert_eq!(code, EXIT_OK);
    let extra = doc["result"]["presentation"]["extra"].as_array().unwrap();
    assert_eq!(extra.len(), 1);
    assert_eq!(extra[0]["generators"], json!(["a", "b", "c", "d"]));
    assert_eq!(doc["result"]["flags"], json!({ "simple": true, "purely_infinite": true }));
    let (_, doc) = json_run(&g, &["minimal"]);
    assert_eq!(doc["result"]["coincides_with_boundary_ideal"], true);
}

#[test]
fn flags_are_withheld_with_a_centre() {
    let g = graph_file(EDGE);
    let (code, doc) = json_run(&g, &["boundary"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["result"]["flags"], Value::Null);
    assert_eq!(doc["result"]["isolated_vertices"], json!(["a", "b"]));
    let (code, _) = json_run(&g, &["present", ""]);
    assert_eq!(code, EXIT_INPUT);
    let (_, doc) = json_run(&g, &["core"]);
    assert_eq!(doc["result"]["core"], json!(["a", "b"]));
    assert_eq!(doc["result"]["boundary_action_topologically_free"], false);
}

#[test]
fn monoid_commands() {
    let g = graph_file(EDGE);
    let (_, doc) = json_run(&g, &["nf", "b a b"]);
    assert_eq!(doc["result"]["normal_form"], "a b b");
    let (_, doc) = json_run(&g, &["join", "a", "b"]);
    assert_eq!(doc["result"]["join"], "a b");
    let (_, doc) = json_run(&g, &["divides", "b", "ab"]);
    assert_eq!(doc["result"]["quotient"], "a");
    let free = graph_file(EDGELESS2);
    let (_, doc) = json_run(&free, &["join", "a", "b"]);
    assert_eq!(doc["result"]["join"], "INF");
}

#[test]
fn lattice_commands() {
    let g = graph_file(K22);
    let (code, doc) = json_run(&g, &["separate", "{a1}", "{b1}"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["result"]["point"]["w"], "b1 b2");
    let (_, doc) = json_run(&g, &["saturate", "a1,a2"]);
    assert_eq!(doc["result"]["ideal"], json!([["a1"]]));
    let (code, _) = json_run(&g, &["separate", "{a1}", "{a1},{a1,b1}"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn text_output_carries_the_same_data() {
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (K22, vec!["ideals"]),
        (K22, vec!["present", "{a1},{b1}"]),
        (PATH4, vec!["boundary"]),
        (EDGELESS2, vec!["classify", "a,bb"]),
        (EDGELESS2, vec!["euler"]),
        (PATH4, vec!["components"]),
        (EDGE, vec!["core"]),
        (EDGE, vec!["join", "a", "bb"]),
    ];
    for (graph, args) in cases {
        let g = graph_file(graph);
        let path = g.path().to_str().unwrap();
        let mut argv = vec!["raag", "--graph", path];
        argv.extend_from_slice(&args);
        let text = run(argv.clone());
        argv.push("--json");
        let structured = run(argv);
        assert_eq!(text.code, EXIT_OK);
        let doc: Value = serde_json::from_str(&structured.stdout).unwrap();
        assert_eq!(unflatten(&text.stdout), Some(doc), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let g = graph_file(K22);
    let path = g.path().to_str().unwrap();
    let first = run(["raag", "--graph", path, "ideals"]);
    for _ in 0..3 {
        assert_eq!(run(["raag", "--graph", path, "ideals"]), first);
    }
}

#[test]
fn input_errors_exit_with_one() {
    let g = graph_file(EDGELESS2);
    let path = g.path().to_str().unwrap();
    assert_eq!(run(["raag", "nf", "a"]).code, EXIT_INPUT);
    assert_eq!(run(["raag", "--graph", path, "nf", "z"]).code, EXIT_INPUT);
    assert_eq!(run(["raag", "--graph", path, "frobnicate"]).code, EXIT_INPUT);
    assert_eq!(run(["raag", "--graph", "/nonexistent/graph", "nf", "a"]).code, EXIT_INPUT);
    let bad = graph_file("vertices: a b\nedge: a c\n");
    let out = run(["raag", "--graph", bad.path().to_str().unwrap(), "nf", "a"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("`c`"), "{}", out.stderr);
    assert_eq!(run(["raag", "--help"]).code, EXIT_OK);
}

#[test]
fn binary_reports_exit_codes() {
    let g = graph_file(EDGELESS2);
    let bin = env!("CARGO_BIN_EXE_raag");
    let ok = Command::new(bin).args(["--graph", g.path().to_str().unwrap(), "classify", "a,b"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("result.class: ESSENTIAL"));
    let bad = Command::new(bin).args(["--graph", g.path().to_str().unwrap(), "classify", ""]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
