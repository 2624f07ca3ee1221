use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    root().join("data").join(name).display().to_string()
}

fn casewise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casewise"))
        .args(args)
        .env_remove("CASEWISE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = casewise(&full);
    (
        code(&out),
        serde_json::from_slice(&out.stdout).expect("stdout is JSON"),
    )
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schema/casewise-output.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, value: &Value) {
    let errors: Vec<String> = v
        .iter_errors(value)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn query_exit_codes() {
    let out = casewise(&["query", &data("disjunctive_fact.theory"), "r"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("true\n"));

    let out = casewise(&["query", &data("cases_attack.theory"), "v"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("false\n"));

    let out = casewise(&[
        "query",
        &data("cases_attack.theory"),
        "v",
        "--sem",
        "complete",
        "--mode",
        "intersect",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn errors_exit_two() {
    let out = casewise(&["query", &data("no_such.theory"), "p"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = casewise(&["query", &data("cases_attack.theory"), "p &"]);
    assert_eq!(code(&out), 2);

    let bad = std::env::temp_dir().join(format!("casewise-bad-{}.theory", std::process::id()));
    std::fs::write(&bad, "facts:\n  p\ndefeasible:\n  d1: p => \n").unwrap();
    let out = casewise(&["extensions", &bad.display().to_string()]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(code(&out), 2);
}

#[test]
fn facts_only_grounded_extension() {
    let theory = std::env::temp_dir().join(format!("casewise-facts-{}.theory", std::process::id()));
    std::fs::write(&theory, "facts:\n  p\n  q\n").unwrap();
    let (status, v) = json(&["extensions", &theory.display().to_string()]);
    std::fs::remove_file(&theory).ok();
    assert_eq!(status, 0);
    let exts = v["extensions"].as_array().unwrap();
    assert_eq!(exts.len(), 1);
    let args: Vec<&str> = exts[0]["arguments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap())
        .collect();
    assert_eq!(args, ["<p>", "<q>", "<T>"]);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["arguments", "cases_attack.theory"],
        vec!["attacks", "broken_arm.theory"],
        vec!["extensions", "cases_mutual.theory", "--sem", "preferred"],
    ] {
        let path = data(args[1]);
        let mut full = args.clone();
        full[1] = &path;
        let first = casewise(&full);
        let second = casewise(&full);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn budget_from_environment() {
    let path = data("rbc_chains.theory");
    let (_, defaults) = json(&["arguments", &path]);
    assert_eq!(defaults["config"]["max_rule_applications"], 12);

    let out = Command::new(env!("CARGO_BIN_EXE_casewise"))
        .args(["--format", "json", "arguments", &path])
        .env("CASEWISE_BUDGET", "1")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["max_rule_applications"], 1);
    let rows = v["arguments"].as_array().unwrap();
    assert!(rows
        .iter()
        .all(|r| r["rule_applications"].as_u64().unwrap() <= 1));
    assert!(rows.len() < defaults["arguments"].as_array().unwrap().len());

    let (_, flag) = json(&["--budget", "2", "arguments", &path]);
    assert_eq!(flag["config"]["max_rule_applications"], 2);
}

#[test]
fn json_matches_schema() {
    let v = validator();
    let runs: Vec<Vec<String>> = [
        "arguments broken_arm.theory",
        "attacks cases_attack.theory",
        "extensions cases_mutual.theory --sem complete",
        "query split_chains.theory v --sem preferred --mode intersect",
        "postulates cases_attack.theory",
        "baseline ddl cases_attack.ddl --query v",
        "baseline ddl disjunctive_fact.ddl",
        "baseline gor cases_attack.theory --query v --bound 16",
    ]
    .iter()
    .map(|line| {
        line.split(' ')
            .map(|w| {
                if w.contains('.') {
                    data(w)
                } else {
                    w.to_string()
                }
            })
            .collect()
    })
    .collect();
    for args in runs {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (status, value) = json(&refs);
        assert!(status <= 1, "{args:?}");
        assert_valid(&v, &value);
    }
    assert!(!v.is_valid(&serde_json::json!({ "command": "query", "formula": "p" })));
}

#[test]
fn postulates_pass_on_shipped_theories() {
    for name in [
        "cases_attack.theory",
        "broken_arm.theory",
        "self_defeat.theory",
    ] {
        let (status, v) = json(&["postulates", &data(name)]);
        assert_eq!(status, 0, "{name}");
        assert!(
            v["reports"]
                .as_array()
                .unwrap()
                .iter()
                .all(|r| r["status"] != "fail"),
            "{name}"
        );
    }
}

#[test]
fn baselines() {
    let out = casewise(&["baseline", "ddl", &data("disjunctive_fact.ddl"), "--query", "r"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("r: skeptical"));

    let (status, v) = json(&["baseline", "ddl", &data("cases_attack.ddl"), "--query", "v"]);
    assert_eq!(status, 1);
    assert_eq!(v["extensions"].as_array().unwrap().len(), 3);
    assert_eq!(v["query"]["skeptical"], false);

    let (status, v) = json(&[
        "baseline",
        "gor",
        &data("cases_attack.theory"),
        "--query",
        "v",
    ]);
    assert_eq!(status, 0);
    assert_eq!(v["truncated"], true);
    let lits: Vec<&str> = v["literal_consequences"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap())
        .collect();
    assert!(lits.contains(&"v") && lits.contains(&"!s"));
}
