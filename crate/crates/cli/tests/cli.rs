//! End-to-end checks of the binary: subcommand behavior, exit codes, output
//! determinism, and JSON schema conformance.

use std::collections::HashMap;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coset-forge"))
        .args(args)
        .env_remove("COSET_FORGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

const FIXTURE_GENS: &str = "a^3,b^3,ab^2A,ba^3B,bab^2AB";

#[test]
fn malnormal_answers() {
    let out = run(&["malnormal", "--gens", "a", "--f", "b"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "true");

    let out = run(&["malnormal", "--gens", FIXTURE_GENS, "--f", "a"]);
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn stabilizer_lists_expected_generators() {
    let out = run(&["stabilizer", "--gens", FIXTURE_GENS, "--f", "a"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.remove(0), "rank 3");
    lines.sort_unstable();
    assert_eq!(lines, ["BBaaabb", "aaa", "bbbbbb"]);
}

#[test]
fn enumerate_coset_matches_shortlex_listing() {
    let out = run(&[
        "enumerate",
        "--automaton",
        "coset",
        "--gens",
        "a",
        "--f",
        "b",
        "--max-len",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let words: Vec<&str> = text.lines().collect();
    assert_eq!(
        words,
        ["b", "ab", "Ab", "ba", "bA", "aab", "aba", "abA", "AAb", "Aba", "AbA", "baa", "bAA"]
    );
}

#[test]
fn representative_in_subgroup_is_domain_error() {
    let out = run(&["malnormal", "--gens", "aa", "--f", "a^4"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "malnormal",
        "--gens",
        "aa",
        "--f",
        "a^4",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["error"]["code"], "RepresentativeInSubgroup");
}

#[test]
fn word_parse_failure_exits_two() {
    let out = run(&["minrep", "--gens", "a", "--f", "$"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_passes_and_perturbed_demo_fails() {
    let out = run(&["demo"]);
    assert!(out.status.success(), "demo stderr: {:?}", out.stderr);
    assert!(stdout(&out).contains("all fixtures match"));

    let out = run(&["demo", "--gens", "a^4,b^3,ab^2A,ba^3B,bab^2AB"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "demo",
        "--gens",
        "a^4,b^3,ab^2A,ba^3B,bab^2AB",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["error"]["code"], "FixtureMismatch");
}

#[test]
fn demo_dot_emits_three_files() {
    let dir = std::env::temp_dir().join(format!("coset-forge-demo-{}", std::process::id()));
    let out = run(&["demo", "--format", "dot", "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success());
    for name in ["subgroup_graph.dot", "stabilizer_graph.dot", "coset_automaton.dot"] {
        let path = dir.join(name);
        let contents = std::fs::read_to_string(&path).expect("dot file written");
        assert!(contents.starts_with("digraph"));
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_config_and_seed_gives_identical_output() {
    let args = [
        "verify-k",
        "--gens",
        "abab",
        "--f",
        "ab",
        "--samples",
        "200",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn env_seed_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_coset-forge"))
        .args(["verify-k", "--gens", "a", "--f", "b", "--samples", "10"])
        .env("COSET_FORGE_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with("# seed 42"));

    // An explicit flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_coset-forge"))
        .args([
            "verify-k", "--gens", "a", "--f", "b", "--samples", "10", "--seed", "3",
        ])
        .env("COSET_FORGE_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with("# seed 3"));
}

#[test]
fn automaton_text_format_header() {
    let out = run(&["automaton", "subgroup", "--gens", "a^3"]);
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("states "));
    assert!(header.contains("initial 0"));
    assert!(text.lines().skip(1).all(|l| l.split(' ').count() == 3));
}

// --- JSON schema conformance -----------------------------------------------

/// Minimal structural validator for the subset of JSON Schema the shipped
/// schemas use: `type`, `properties`, `required`, `items`.
fn validate(schema: &serde_json::Value, value: &serde_json::Value) -> Result<(), String> {
    if let Some(ty) = schema.get("type").and_then(|t| t.as_str()) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            other => return Err(format!("unsupported type {other}")),
        };
        if !ok {
            return Err(format!("expected {ty}, got {value}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
        for key in required {
            let key = key.as_str().unwrap();
            if value.get(key).is_none() {
                return Err(format!("missing required key {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate(sub, v).map_err(|e| format!("{key}: {e}"))?;
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(items, v).map_err(|e| format!("[{i}]: {e}"))?;
            }
        }
    }
    Ok(())
}

fn schema(name: &str) -> serde_json::Value {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).unwrap()
}

#[test]
fn json_outputs_validate_against_shipped_schemas() {
    let cases: HashMap<&str, Vec<Vec<&str>>> = HashMap::from([
        (
            "graph.schema.json",
            vec![
                vec!["fold", "--gens", FIXTURE_GENS, "--format", "json"],
                vec!["stabilizer", "--gens", FIXTURE_GENS, "--f", "a", "--format", "json"],
            ],
        ),
        (
            "verify_k.schema.json",
            vec![vec![
                "verify-k", "--gens", "abab", "--f", "ab", "--samples", "50", "--format", "json",
            ]],
        ),
        (
            "automaton.schema.json",
            vec![
                vec!["automaton", "subgroup", "--gens", "a^3", "--format", "json"],
                vec!["automaton", "cone", "--w1", "a", "--w2", "b", "--format", "json"],
                vec!["automaton", "coset", "--gens", "aa", "--f", "a", "--format", "json"],
            ],
        ),
        (
            "nielsen.schema.json",
            vec![vec!["nielsen", "--gens", FIXTURE_GENS, "--format", "json"]],
        ),
        (
            "pieces.schema.json",
            vec![vec!["pieces", "--gens", "a^3", "--format", "json"]],
        ),
        (
            "solve.schema.json",
            vec![vec![
                "solve", "--gens", "a", "--g", "aba", "--f", "b", "--format", "json",
            ]],
        ),
        (
            "essential.schema.json",
            vec![vec!["essential", "--gens", "aa", "--format", "json"]],
        ),
        (
            "words.schema.json",
            vec![vec![
                "enumerate", "--automaton", "subgroup", "--gens", "a^3", "--max-len", "6",
                "--format", "json",
            ]],
        ),
        (
            "error.schema.json",
            vec![vec![
                "malnormal", "--gens", "aa", "--f", "a^4", "--format", "json",
            ]],
        ),
    ]);
    for (schema_name, runs) in cases {
        let sch = schema(schema_name);
        for args in runs {
            let out = run(&args);
            let value: serde_json::Value = serde_json::from_str(&stdout(&out))
                .unwrap_or_else(|e| panic!("bad json from {args:?}: {e}"));
            validate(&sch, &value)
                .unwrap_or_else(|e| panic!("{schema_name} violated by {args:?}: {e}"));
        }
    }
}
