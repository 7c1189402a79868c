//! End-to-end checks of the binary: formats, exit codes, pipelines.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treepack"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treepack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, content: &str) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn analyze_k4() {
    let file = write("k4.txt", "a b\na c\na d\nb c\nb d\nc d\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["colouring_number"], 4);
    assert_eq!(doc["edge_connectivity"], 3);
    assert_eq!(doc["min_cover_number"], 2);
    assert_eq!(doc["max_packing_size"], 2);
}

#[test]
fn analyze_c5() {
    let file = write("c5.txt", "a b\nb c\nc d\nd e\ne a\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["colouring_number"], 3);
    assert_eq!(doc["edge_connectivity"], 2);
    assert_eq!(doc["min_cover_number"], 2);
    assert_eq!(doc["max_packing_size"], 1);
}

#[test]
fn analyze_single_vertex() {
    let file = write("single.txt", "vertex a\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["colouring_number"], 1);
    assert_eq!(doc["edge_connectivity"], serde_json::Value::Null);
    assert_eq!(doc["min_cover_number"], 1);
    assert_eq!(doc["max_packing_size"], 1);
}

#[test]
fn analyze_disconnected_marks_nulls() {
    let file = write("disc.txt", "a b\nvertex c\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["connected"], false);
    assert_eq!(doc["edge_connectivity"], 0);
    assert_eq!(doc["min_cover_number"], serde_json::Value::Null);
    assert_eq!(doc["max_packing_size"], serde_json::Value::Null);
}

#[test]
fn decompose_and_verify_round_trip() {
    let graph = write("mk2.txt", "a b\na b\n");
    let cert = tmp("mk2-cert.json");
    let out = run(&[
        "decompose",
        graph.to_str().unwrap(),
        "-k",
        "2",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let verify = run(&["verify", graph.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_json(&verify)["valid"], true);
}

#[test]
fn decompose_refusal_carries_witness() {
    let graph = write("c5b.txt", "a b\nb c\nc d\nd e\ne a\n");
    let out = run(&["decompose", graph.to_str().unwrap(), "-k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["refused"], true);
    assert_eq!(doc["hypothesis"], "packing");
    assert!(doc["witness"]["cross_edges"].as_u64().unwrap() < doc["witness"]["bound"].as_u64().unwrap());
}

#[test]
fn decompose_trace_has_no_swaps() {
    let graph = write("dp3.txt", "a b\na b\nb c\nb c\n");
    let trace = tmp("dp3-trace.jsonl");
    let out = run(&[
        "decompose",
        graph.to_str().unwrap(),
        "-k",
        "2",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count(), 4);
    for line in lines.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["action"], "noop");
    }
}

#[test]
fn verify_rejects_overlapping_packing() {
    let graph = write("mk2c.txt", "a b\na b\n");
    let cert = write(
        "bad-cert.json",
        r#"{"kind": "packing", "k": 2, "trees": [[0], [0]]}"#,
    );
    let out = run(&["verify", graph.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["valid"], false);
    assert!(doc["reason"].as_str().unwrap().contains("share edge 0"));
}

#[test]
fn verify_missing_edge_named() {
    let graph = write("mk2d.txt", "a b\na b\n");
    let cert = write(
        "gap-cert.json",
        r#"{"kind": "covering", "k": 2, "trees": [[0], [0]]}"#,
    );
    let out = run(&["verify", graph.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["reason"]
        .as_str()
        .unwrap()
        .contains("edge 1"));
}

#[test]
fn generate_prop32_counts() {
    let out_path = tmp("prop32.json");
    let out = run(&[
        "generate",
        "prop32",
        "--levels",
        "1",
        "--c",
        "2",
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["vertex_count"], 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn generate_is_deterministic_and_prints_seed() {
    let a = run(&["generate", "doubled_tree", "-n", "9", "--seed", "5"]);
    let b = run(&["generate", "doubled_tree", "-n", "9", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed: 5"));
}

#[test]
fn pack_cover_pipeline() {
    let graph = write("k4b.txt", "a b\na c\na d\nb c\nb d\nc d\n");
    let pack = run(&["pack", graph.to_str().unwrap(), "-k", "2"]);
    assert!(pack.status.success());
    assert_eq!(stdout_json(&pack)["kind"], "packing");
    let cover = run(&["cover", graph.to_str().unwrap()]);
    assert!(cover.status.success());
    assert_eq!(stdout_json(&cover)["kind"], "covering");
    let refuse = run(&["cover", graph.to_str().unwrap(), "-k", "1"]);
    assert_eq!(refuse.status.code(), Some(1));
    assert_eq!(stdout_json(&refuse)["density"]["verdict"], "violated");
}

#[test]
fn simulate_comb_star_exit_zero_with_swaps() {
    let trace = tmp("comb.jsonl");
    let out = run(&[
        "simulate",
        "comb_star",
        "-k",
        "2",
        "-N",
        "500",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert!(doc["swaps"].as_u64().unwrap() > 0);
    assert_eq!(doc["stabilization_ok"], true);
    assert_eq!(doc["prefix_fully_covered"], true);
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count(), 500);
}

#[test]
fn simulate_negative_controls() {
    let out = run(&["simulate", "multiplied_ray", "--m", "3", "-k", "2", "-N", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["outcome"]["kind"], "no_eligible_tree");
    assert_eq!(doc["outcome"]["edge"], 2);

    let out = run(&["simulate", "doubled_ray", "-k", "2", "-N", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["swaps"], 0);
}

#[test]
fn usage_errors_exit_three() {
    let out = run(&["analyze", "/nonexistent/file.txt"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["generate", "unknown_family"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_error_reports_line() {
    let file = write("bad.txt", "a b\na b c d\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
