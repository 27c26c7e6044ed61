use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn medial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medial"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is json")
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn clock_on_trefoil() {
    let out = medial(&["clock", &path("trefoil.yaml")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verb"], "clock");
    assert_eq!(report["seed"], 0);
    assert_eq!(report["result"]["states"].as_array().unwrap().len(), 3);
    assert_eq!(report["input_sha256"].as_str().unwrap().len(), 64);

    let dot = medial(&["clock", &path("trefoil.yaml"), "--format", "dot"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("// medial clock; input_sha256 "));
    assert_eq!(text.matches("->").count(), 2);
}

#[test]
fn check_all_builtin_passes() {
    let out = medial(&["check-all"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["failed"], 0);
    assert!(report["result"]["checks"].as_u64().unwrap() > 50);
}

#[test]
fn check_all_on_directory() {
    let out = medial(&["check-all", &path("")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["instances"], 11);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.yaml");
    std::fs::write(&file, "vertices: [[0, 1]\nedges: []\n").unwrap();
    let out = medial(&["medial", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.yaml") && err.contains("line"), "{err}");
}

#[test]
fn non_spherical_rotation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("theta.yaml");
    std::fs::write(
        &file,
        "vertices: [[0, 2, 4], [1, 3, 5]]\nedges: [[0, 1], [2, 3], [4, 5]]\n",
    )
    .unwrap();
    let out = medial(&["medial", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("1 faces"));
    std::fs::write(
        &file,
        "vertices: [[0, 2, 4], [1, 5, 3]]\nedges: [[0, 1], [2, 3], [4, 5]]\n",
    )
    .unwrap();
    let report = json(&medial(&["medial", file.to_str().unwrap()]));
    assert_eq!(report["result"]["faces"].as_array().unwrap().len(), 3);
}

#[test]
fn composite_diagram_is_a_counterexample() {
    let out = medial(&["clock", &path("trefoil_sum.yaml")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not prime"));
    let check = json(&medial(&["prime-check", &path("trefoil_sum.yaml")]));
    assert_eq!(check["result"]["prime"], false);
}

#[test]
fn reports_are_deterministic() {
    for verb in ["bms-lattice", "subreps", "endo", "move-graph"] {
        let a = medial(&[verb, &path("figure_eight.yaml"), "--seed", "7"]);
        let b = medial(&[verb, &path("figure_eight.yaml"), "--seed", "7"]);
        assert_eq!(a.status.code(), Some(0), "{verb}");
        assert_eq!(a.stdout, b.stdout, "{verb}");
        assert_eq!(json(&a)["seed"], 7);
    }
}

#[test]
fn representation_verbs() {
    let iso = json(&medial(&["verify-iso", &path("figure_eight.yaml")]));
    assert_eq!(iso["result"]["certificate"]["plus_size"], 5);
    assert_eq!(iso["result"]["certificate"]["subrep_size"], 5);
    let endo = json(&medial(&["endo", &path("trefoil.yaml")]));
    assert_eq!(endo["result"]["local"], true);
    assert_eq!(
        endo["result"]["simple_quotients"],
        endo["result"]["anti_movable_edges"]
    );
    let jac = medial(&["jacobian-check", &path("hopf.yaml"), "--phantom"]);
    assert_eq!(jac.status.code(), Some(0));
    assert_eq!(
        json(&jac)["result"]["report"]["residuals"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
    let module = json(&medial(&["module", &path("trefoil.yaml"), "--state", "0"]));
    assert!(module["result"]["module"]["dims"].is_array());
}

#[test]
fn weights_from_file() {
    let out = medial(&[
        "states",
        &path("triangle.yaml"),
        "--weight",
        &path("triangle.weight.yaml"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["result"]["count"].as_u64().unwrap() > 0);
    let nil = json(&medial(&[
        "nilpotency",
        &path("triangle.yaml"),
        "--weight",
        &path("triangle.weight.yaml"),
    ]));
    assert!(nil["result"]["nilpotency_degree"].as_i64().unwrap() > 0);
    let missing = medial(&["states", &path("triangle.yaml")]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn graph_output_only_where_defined() {
    let out = medial(&["nilpotency", &path("trefoil.yaml"), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(2));
    let out = medial(&["medial", &path("trefoil.yaml"), "--format", "dot"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("digraph medial"));
}

#[test]
fn bounds_must_be_positive() {
    let out = medial(&["clock", &path("trefoil.yaml"), "--bound-lattice", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = medial(&[
        "kauffman-states",
        &path("trefoil.yaml"),
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(report["result"]["count"], 3);
    assert_eq!(report["result"]["direct_enumeration_agrees"], true);
}
