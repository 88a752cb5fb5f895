//! End-to-end CLI checks: exit codes, deterministic output, and the wire
//! formats named in the interface contract.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schreier-ising"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn usage_error_exits_2() {
    let o = run(&["graph", "build", "--family"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_3() {
    let o = run(&[
        "verify",
        "oracle",
        "--family",
        "grigorchuk",
        "--level",
        "5",
        "--budget-rank",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("required 15"), "stderr: {err}");
}

#[test]
fn verify_oracle_reports_ok() {
    let o = run(&["verify", "oracle", "--family", "hanoi", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "OK: 16 polygons, genfun == enumeration\nOK: spin sum == assembled partition function\n"
    );
    // Above the vertex budget only the enumeration line is printed.
    let o = run(&["verify", "oracle", "--family", "hanoi", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK: 8192 polygons, genfun == enumeration\n");
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["graph", "build", "--family", "basilica", "--level", "3"],
        vec!["genfun", "compute", "--family", "hanoi", "--level", "2"],
        vec![
            "stats",
            "labels",
            "--family",
            "grigorchuk",
            "--level",
            "4",
            "--labeling",
            "labels",
        ],
        vec![
            "ising",
            "partition",
            "--family",
            "sierpinski",
            "--level",
            "2",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&a), stdout(&b), "{args:?}");
    }
}

#[test]
fn graph_json_schema_fields() {
    let o = run(&["graph", "build", "--family", "hanoi", "--level", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family"], "hanoi");
    assert_eq!(v["level"], 2);
    assert_eq!(v["labeling"], "schreier");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 9);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 15); // 12 normal + 3 loops
    assert!(edges.iter().all(|e| {
        e["u"].is_string() && e["v"].is_string() && e["label"].is_string() && e["kind"].is_string()
    }));
    let loops: Vec<&serde_json::Value> = edges.iter().filter(|e| e["kind"] == "loop").collect();
    assert_eq!(loops.len(), 3);
}

#[test]
fn fisher_transform_emits_e_edges() {
    let o = run(&[
        "fisher",
        "transform",
        "--family",
        "sierpinski",
        "--level",
        "2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 33);
    assert_eq!(edges.iter().filter(|e| e["kind"] == "e").count(), 9);
}

#[test]
fn genfun_compute_grigorchuk_level4() {
    let o = run(&[
        "genfun",
        "compute",
        "--family",
        "grigorchuk",
        "--level",
        "4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["gamma-at-1"], "128");
    assert_eq!(v["gamma-degree"], 14);
    // (1+z^2)^7 has binomial coefficients.
    let terms = v["gamma"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 8);
    assert_eq!(terms[3]["coef"], "35");
}

#[test]
fn verify_all_quick_passes() {
    let o = run(&["verify", "all", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "stdout: {}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.matches(": PASS").count(), 7);
}

#[test]
fn renorm_defect_small_for_sierpinski() {
    let o = run(&[
        "ising",
        "renorm",
        "--variant",
        "sierpinski",
        "--y",
        "1.5",
        "--level",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let defect_line = text.lines().find(|l| l.starts_with("defect")).unwrap();
    let val: f64 = defect_line.split(" = ").nth(1).unwrap().parse().unwrap();
    assert!(val < 1e-9, "{defect_line}");
}
