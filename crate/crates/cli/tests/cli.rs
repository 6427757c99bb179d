use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-alpha")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("toric-alpha-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn alpha_json_matches_golden_files() {
    for name in ["p2", "p1xp1", "dp1", "dp2", "dp3"] {
        let out = run(&["alpha", &format!("@{name}"), "--json"]);
        assert_eq!(out.status.code(), Some(0));
        let expected = std::fs::read_to_string(golden(&format!("alpha_{name}.json"))).unwrap();
        assert_eq!(stdout(&out), expected, "golden mismatch for {name}");
    }
}

#[test]
fn alpha_values() {
    let dp2 = json(&["alpha", "@dp2", "--json"]);
    assert_eq!(dp2["alpha"]["alpha"], "1/3");
    assert_eq!(dp2["alpha"]["m_zero"], 1);

    let out = run(&["alpha", "@p2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("alpha_G:    1\n"), "{text}");
    assert!(text.contains("symmetric:  yes"), "{text}");
    let p2 = json(&["alpha", "@p2", "--json"]);
    assert_eq!(p2["alpha"]["alpha"], "1");
    assert_eq!(p2["alpha"]["symmetric"], true);
}

#[test]
fn alpha_certificate_and_table() {
    let plain = json(&["alpha", "@dp1", "--json"]);
    assert!(plain["alpha"].get("certificate").is_none());
    let full = json(&["alpha", "@dp1", "--json", "--certificate", "--table", "3"]);
    let cert = full["alpha"]["certificate"].as_array().unwrap();
    assert_eq!(cert.len(), 2);
    assert!(cert.iter().all(|c| c["ratio"] == "1"));
    let table = full["alpha_m"].as_array().unwrap();
    assert_eq!(table[0]["status"], "not_determined");
    assert_eq!(table[0]["lower"], "1/2");
    assert_eq!(table[1]["value"], "1/2");

    let text = stdout(&run(&["alpha", "@dp1", "--certificate"]));
    assert!(text.contains("certificate:"));
}

#[test]
fn check_reports_diagnosis() {
    let out = run(&["check", "@dp3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("fano:     yes"));
    let doc = json(&["check", "@p1xp1", "--json"]);
    assert_eq!(doc["diagnosis"]["is_fano"], true);
    assert_eq!(doc["input"]["name"], "p1xp1");
}

#[test]
fn check_fails_on_incomplete_fan() {
    let broken = temp_file(
        "broken_p2.json",
        r#"{"name": "broken", "dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2]]}"#,
    );
    let out = run(&["check", broken.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["diagnosis"]["is_complete"], false);

    let out = run(&["alpha", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not a smooth Fano fan"));
}

#[test]
fn symmetry_output() {
    let doc = json(&["symmetry", "@p1xp1", "--json"]);
    assert_eq!(doc["symmetry"]["group_order"], 8);
    assert_eq!(doc["symmetry"]["elements"].as_array().unwrap().len(), 8);
    let text = stdout(&run(&["symmetry", "@dp1"]));
    assert!(text.contains("group order: 2"));
    assert!(text.contains("fixed in M:  dim 1, basis (1, 1)"));
}

#[test]
fn points_output() {
    let doc = json(&["points", "@p2", "--json"]);
    assert_eq!(doc["lattice_points"]["count"], 10);
    assert!(doc["lattice_points"].get("points").is_none());
    let doc = json(&["points", "@dp1", "--m", "1", "--list", "--json"]);
    assert_eq!(doc["lattice_points"]["points"].as_array().unwrap().len(), 9);
    let text = stdout(&run(&["points", "@p2", "--m", "2", "--list"]));
    assert!(text.contains("points: 28"));
    assert!(text.contains("  (0, 0)"));
}

#[test]
fn barycenter_output() {
    let doc = json(&["barycenter", "@dp3", "--json"]);
    assert_eq!(doc["barycenter"], serde_json::json!(["0", "0"]));
    let text = stdout(&run(&["barycenter", "@dp2"]));
    assert!(text.contains("barycenter: (-2/21, -2/21)"), "{text}");
}

#[test]
fn integral_test_output() {
    let doc = json(&["integral-test", "@dp2", "--alpha", "1/4", "--cutoffs", "32,64,128", "--json"]);
    assert_eq!(doc["oracle"]["exact_predicate"], true);
    assert_eq!(doc["oracle"]["numerical"]["verdict"], "convergent");
    assert_eq!(doc["oracle"]["direction"], serde_json::json!(["-1", "-1"]));

    let doc = json(&[
        "integral-test", "@dp1", "--alpha", "0.6", "--direction", "1/2,1/2", "--cutoffs", "32,64,128", "--json",
    ]);
    assert_eq!(doc["oracle"]["exact_predicate"], false);
    assert_eq!(doc["oracle"]["numerical"]["verdict"], "divergent");

    let text = stdout(&run(&["integral-test", "@dp2", "--alpha", "0.4", "--cutoffs", "16,32"]));
    assert!(text.contains("exact:     not certified finite"), "{text}");
}

#[test]
fn catalog_listing() {
    let text = stdout(&run(&["catalog"]));
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("@p2"));
    let doc = json(&["catalog", "--json"]);
    assert_eq!(doc.as_array().unwrap().len(), 5);
    assert_eq!(doc[3]["name"], "dp2");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["alpha"],
        vec!["alpha", "@nowhere"],
        vec!["alpha", "/definitely/not/here.json"],
        vec!["points", "@p2", "--m", "0"],
        vec!["integral-test", "@dp2", "--alpha", "1/0"],
        vec!["integral-test", "@dp2", "--alpha", "3/2"],
        vec!["integral-test", "@dp2", "--alpha", "1/4", "--cutoffs", "64,32"],
        vec!["integral-test", "@dp2", "--alpha", "1/4", "--direction", "1,2,3"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = stderr(&out);
        assert!(!err.is_empty(), "{args:?}");
        assert!(!err.contains("panicked"), "{args:?}: {err}");
    }
}

#[test]
fn malformed_files_exit_with_one() {
    let cases = [
        ("syntax.json", "{\n  \"name\": \"x\",\n  \"dim\": 2,,\n}", "line 3"),
        (
            "nonprimitive.json",
            r#"{"name": "x", "dim": 2, "rays": [[2,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}"#,
            "non-primitive ray at index 0",
        ),
    ];
    for (file, contents, needle) in cases {
        let path = temp_file(file, contents);
        let out = run(&["check", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{file}");
        let err = stderr(&out);
        assert!(err.contains(needle), "{file}: {err}");
        assert!(!err.contains("panicked"));
    }
}
