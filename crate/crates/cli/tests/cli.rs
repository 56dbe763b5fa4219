use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hforest"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .trim_end()
        .to_string()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

const CHAIN2: &str = r#"{"points": 2, "le": [[0, 1]]}"#;

#[test]
fn compare_examples() {
    assert_eq!(
        ok(&["compare", "--lhs", "0*(1)", "--rhs", "0|1"]),
        r#"{"h_leq": false, "h_geq": true}"#
    );
    assert_eq!(
        ok(&["compare", "--lhs", "bot", "--rhs", "0"]),
        r#"{"h_leq": true, "h_geq": false}"#
    );
}

#[test]
fn canonical_omega() {
    assert_eq!(
        ok(&["canonical", "--alpha", "w", "--emit", "term"]),
        "s(0*1)"
    );
    let json = ok(&[
        "canonical",
        "--alpha",
        "w*2",
        "--polarity",
        "bar",
        "--emit",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v.is_array());
    assert!(ok(&["canonical", "--alpha", "3", "--emit", "dot"]).starts_with("digraph"));
}

#[test]
fn lattice_verbs() {
    assert_eq!(ok(&["meet", "--lhs", "0*1", "--rhs", "1*0"]), "0⊔1");
    assert_eq!(ok(&["join", "--lhs", "0*1", "--rhs", "0"]), "0*1");
    assert_eq!(ok(&["normalize", "--forest", "0*(1|1*0|0)"]), "0*1*0");
}

#[test]
fn classify_flat_and_nested() {
    assert_eq!(ok(&["classify", "--forest", "1*0|0*1"]), "T_1⊔T̄_1");
    assert_eq!(ok(&["classify", "--forest", "s(0*1)"]), "T_w");
    let o = run(&["classify", "--forest", "0*2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn forest_from_file_and_json() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"[{{"label": 0, "children": [{{"label": 1, "children": []}}]}}]"#
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    assert_eq!(ok(&["parse", "--forest", path, "--emit", "term"]), "0*1");
    let v: serde_json::Value = serde_json::from_str(&ok(&["parse", "--forest", "s(0*1)"])).unwrap();
    assert_eq!(v["nesting_level"], 2);
}

#[test]
fn membership_checks() {
    let dir = tempfile::tempdir().unwrap();
    let space = dir.path().join("space.json");
    std::fs::write(&space, CHAIN2).unwrap();
    let part = dir.path().join("part.json");
    std::fs::write(&part, r#"{"labels": [0, 1]}"#).unwrap();
    let (space, part) = (space.to_str().unwrap(), part.to_str().unwrap());
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "dh-check",
        "--space",
        space,
        "--partition",
        part,
        "--forest",
        "0*1",
    ]))
    .unwrap();
    assert_eq!(v["member"], true);
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "dh-check",
        "--space",
        space,
        "--partition",
        "10",
        "--forest",
        "0*1",
    ]))
    .unwrap();
    assert_eq!(v["member"], false);
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "fh-check",
        "--space",
        space,
        "--partition",
        "10",
        "--forest",
        "s(0|1)",
        "--witness",
    ]))
    .unwrap();
    assert_eq!(v["member"], true);
    assert!(v["witness"].is_object());
}

#[test]
fn reduce_and_degrees() {
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "reduce-check",
        "--base",
        "powerset",
        "--partition",
        "0110",
        "--forest",
        "0*1*0",
    ]))
    .unwrap();
    assert_eq!(v["reduction_property"], true);
    assert_eq!(v["reduced"], true);
    let diamond = r#"{"points": 4, "le": [[0, 1], [0, 2], [1, 3], [2, 3]]}"#;
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["reduce-check", "--space", diamond])).unwrap();
    assert_eq!(v["reduction_property"], false);
    let v: serde_json::Value = serde_json::from_str(&ok(&["degrees", "--space", CHAIN2])).unwrap();
    assert!(v.is_object());
    assert!(ok(&["degrees", "--space", CHAIN2, "--emit", "dot"]).starts_with("digraph"));
}

#[test]
fn report_json_and_dot() {
    let args = [
        "report", "--space", CHAIN2, "--forest", "0*1", "--forest", "1*0",
    ];
    let v: serde_json::Value = serde_json::from_str(&ok(&args)).unwrap();
    assert_eq!(v["total"], 4);
    assert_eq!(v["constituents"].as_array().unwrap().len(), 3);
    let mut dot = args.to_vec();
    dot.extend(["--emit", "dot"]);
    let dot = ok(&dot);
    assert!(dot.starts_with("digraph levels"));
    assert!(dot.contains(r#"n1 [label="1*0 (3)"];"#));
}

#[test]
fn output_is_deterministic() {
    let args = ["normalize", "--forest", "1*0|0*(1|2)|0*1", "--emit", "json"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["compare", "--lhs", "0*(", "--rhs", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["canonical", "--alpha", "w^"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["degrees", "--space", "{not json"]).status.code(),
        Some(2)
    );
    let o = run(&[
        "dh-check",
        "--space",
        CHAIN2,
        "--partition",
        "012",
        "--forest",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let cyclic = r#"{"points": 2, "le": [[0, 1], [1, 0]]}"#;
    assert_eq!(run(&["degrees", "--space", cyclic]).status.code(), Some(1));
    let big = r#"{"points": 6, "le": []}"#;
    let o = run(&["degrees", "--space", big]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
}

#[test]
fn selftest_passes_and_catches_a_broken_meet() {
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["selftest", "--suite", "A9", "--suite", "A10"])).unwrap();
    assert_eq!(v["passed"], true);
    let o = run(&["selftest", "--suite", "A2", "--inject-broken-meet"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], serde_json::json!(["A2"]));
    assert_eq!(run(&["selftest", "--suite", "A42"]).status.code(), Some(2));
}
