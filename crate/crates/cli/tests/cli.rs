//! Drives the real binary end to end: reports, exit codes, and the golden
//! demo trace.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repcot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn parse_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("repcot-cli-{}-{name}", std::process::id()))
}

#[test]
fn demo_appendix_matches_the_golden_trace() {
    let out = run(&["demo-appendix"]);
    assert!(out.status.success());
    let expected = include_str!("golden/demo_appendix.json");
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
    let v: Value = serde_json::from_str(expected).unwrap();
    assert_eq!(v["kind"], "precover");
    assert_eq!(v["oracle"], "all-all");
    assert_eq!(v["certificate"]["pass"], true);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let dims: Vec<u64> = levels[2]["sequence"]["middle"]["objects"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 1, 3, 4]);
}

#[test]
fn rooted_reports_both_filtrations() {
    let v = parse_stdout(&run(&["rooted", "--quiver", &data("demo_quiver.json")]));
    assert_eq!(v["left"]["rooted"], true);
    assert_eq!(v["right"]["rooted"], true);
    assert_eq!(v["acyclic"], true);
    assert_eq!(v["left"]["filtration"][1], serde_json::json!(["1", "2"]));

    let v = parse_stdout(&run(&["rooted", "--quiver", &data("loop_quiver.json")]));
    assert_eq!(v["left"]["rooted"], false);
    assert_eq!(v["right"]["rooted"], false);
    assert_eq!(v["acyclic"], false);
}

#[test]
fn paths_lists_arrow_id_sequences() {
    let v = parse_stdout(&run(&[
        "paths",
        "--quiver",
        &data("demo_quiver.json"),
        "--from",
        "1",
        "--to",
        "4",
    ]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["paths"], serde_json::json!([["a", "c"]]));

    // the trivial path shows up as an empty sequence
    let v = parse_stdout(&run(&[
        "paths",
        "--quiver",
        &data("demo_quiver.json"),
        "--from",
        "3",
        "--to",
        "3",
    ]));
    assert_eq!(v["paths"], serde_json::json!([[]]));
}

#[test]
fn ext1_agrees_with_the_euler_form() {
    let v = parse_stdout(&run(&[
        "ext1",
        "--quiver",
        &data("a2_quiver.json"),
        "--base",
        "finvect",
        "--p",
        "2",
        "--rep",
        &data("stalk_s1.json"),
        "--rep2",
        &data("stalk_s2.json"),
    ]));
    assert_eq!(v["ext1"], 1);
    assert_eq!(v["hom"], 0);
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(v["pass"], true);
}

#[test]
fn precover_certifies_and_writes_a_trace() {
    let trace_path = scratch("trace.json");
    let v = parse_stdout(&run(&[
        "precover",
        "--quiver",
        &data("a2_quiver.json"),
        "--base",
        "dual",
        "--p",
        "2",
        "--rep",
        &data("dual_stalk.json"),
        "--pair",
        "free-all",
        "--trace-out",
        trace_path.to_str().unwrap(),
    ]));
    assert_eq!(v["certificate"]["pass"], true);
    let dims: Vec<u64> = v["result"]["middle"]["objects"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 2]);
    let trace: Value =
        serde_json::from_str(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(trace["kind"], "precover");
    assert_eq!(trace["certificate"]["pass"], true);
    std::fs::remove_file(trace_path).ok();
}

#[test]
fn subcategory_engines_run_from_the_cli() {
    let v = parse_stdout(&run(&[
        "precover-sub",
        "--quiver",
        &data("demo_quiver.json"),
        "--base",
        "finvect",
        "--p",
        "2",
        "--rep",
        &data("demo_ones.json"),
        "--sub",
        "evendim",
    ]));
    assert_eq!(v["certificate"]["pass"], true);
    let dims: Vec<u64> = v["result"]["middle"]["objects"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 2, 6, 8]);

    let v = parse_stdout(&run(&[
        "preenvelope-sub",
        "--quiver",
        &data("a2_quiver.json"),
        "--base",
        "dual",
        "--p",
        "2",
        "--rep",
        &data("dual_stalk.json"),
        "--sub",
        "free",
    ]));
    assert_eq!(v["kind"], "preenvelope");
    assert_eq!(v["certificate"]["pass"], true);
}

#[test]
fn verify_cotorsion_passes_on_builtin_pairs() {
    let v = parse_stdout(&run(&[
        "verify-cotorsion",
        "--pair",
        "free-all",
        "--base",
        "dual",
        "--p",
        "3",
        "--seed",
        "9",
        "--samples",
        "10",
        "--max-dim",
        "3",
        "--quiver",
        &data("a2_quiver.json"),
    ]));
    assert_eq!(v["pass"], true);
    assert!(v["certificate"]["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn bad_inputs_exit_2() {
    let cases: Vec<Vec<String>> = vec![
        vec!["rooted".into(), "--quiver".into(), data("malformed.json")],
        vec!["rooted".into(), "--quiver".into(), "/definitely/not/here.json".into()],
        vec![
            "paths".into(),
            "--quiver".into(),
            data("demo_quiver.json"),
            "--from".into(),
            "nope".into(),
            "--to".into(),
            "4".into(),
        ],
        vec![
            "precover".into(),
            "--quiver".into(),
            data("a2_quiver.json"),
            "--base".into(),
            "dual".into(),
            "--p".into(),
            "2".into(),
            "--rep".into(),
            data("dual_stalk.json"),
            "--pair".into(),
            "nope".into(),
        ],
        vec![
            "verify-cotorsion".into(),
            "--pair".into(),
            "all-all".into(),
            "--base".into(),
            "finvect".into(),
            "--p".into(),
            "6".into(), // not prime
        ],
    ];
    for case in cases {
        let args: Vec<&str> = case.iter().map(String::as_str).collect();
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
}
