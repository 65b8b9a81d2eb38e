use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const STRAIGHT: &str = r#"{"r":2,"n":3,"weights":[["-1","1"],["-1","0"],["-1","-1"]]}"#;
const SOL: &str = r#"{"r":1,"n":2,"weights":[["1"],["-2"]]}"#;
const NOT_STRAIGHT: &str = r#"{"r":2,"n":3,"weights":[["1","0"],["0","1"],["-1","-1"]]}"#;

fn lpcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn file(dir: &TempDir, name: &str, body: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let v = json(&lpcoh(&["analyze", &file(&dir, "s.json", STRAIGHT)]));
    assert_eq!(v["npc_witness"], serde_json::json!(["1", "0"]));
    assert!(v.get("reducible_partition").is_none());
    let v = json(&lpcoh(&["analyze", &file(&dir, "sol.json", SOL)]));
    assert!(v.get("npc_witness").is_none());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = file(
        &dir,
        "bad.json",
        r#"{"r":1,"n":2,"weights":[["1/0"],["-2"]]}"#,
    );
    assert_eq!(lpcoh(&["analyze", &bad]).status.code(), Some(2));
    let zero_row = file(
        &dir,
        "zero.json",
        r#"{"r":1,"n":2,"weights":[["0"],["-2"]]}"#,
    );
    assert_eq!(lpcoh(&["analyze", &zero_row]).status.code(), Some(2));
    assert_eq!(
        lpcoh(&["analyze", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    let ns = file(&dir, "ns.json", NOT_STRAIGHT);
    assert_eq!(lpcoh(&["table", "salpha", &ns]).status.code(), Some(3));
    assert_eq!(lpcoh(&["palpha", &ns]).status.code(), Some(3));
    assert_eq!(lpcoh(&["table", "real", "--n", "1"]).status.code(), Some(2));
    assert_eq!(
        lpcoh(&["lemma-num", "--a", "0", "--b", "1", "--A", "1", "--B", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lpcoh(&[
            "sl3-decay",
            "--p",
            "2",
            "--pattern",
            "fdx",
            "--direction",
            "-"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(lpcoh(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn complex_degree_two_table() {
    let v = json(&lpcoh(&["table", "complex", "--m", "2", "--degree", "2"]));
    let regions = &v["reports"][0]["regions"];
    let pieces = regions["pieces"].as_array().unwrap();
    let nonzero: Vec<_> = pieces.iter().filter(|p| p["status"] == "nonzero").collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(
        (nonzero[0]["lo"].as_str(), nonzero[0]["hi"].as_str()),
        (Some("4/3"), Some("4"))
    );
    let punct: Vec<_> = regions["punctures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["at"].clone())
        .collect();
    assert!(punct.contains(&Value::from("2")));
}

#[test]
fn palpha_and_qi() {
    let dir = TempDir::new().unwrap();
    let s = file(&dir, "s.json", STRAIGHT);
    let v = json(&lpcoh(&["palpha", &s]));
    assert_eq!(
        v,
        serde_json::json!({"mu": ["1", "0", "-1"], "p_alpha": "3"})
    );
    let t = file(
        &dir,
        "t.json",
        r#"{"r":2,"n":3,"weights":[["-2","0"],["-2","-1"],["-2","-2"]]}"#,
    );
    assert_eq!(json(&lpcoh(&["qi", &s, &t]))["quasi_isometric"], true);
    let u = file(
        &dir,
        "u.json",
        r#"{"r":2,"n":3,"weights":[["-1","2"],["-1","-1"],["-1","-1"]]}"#,
    );
    assert_eq!(json(&lpcoh(&["qi", &s, &u]))["quasi_isometric"], false);
}

#[test]
fn strips_from_profile() {
    let dir = TempDir::new().unwrap();
    let prof = file(&dir, "p.json", r#"{"lambdas":["0","1","1","2"]}"#);
    let v = json(&lpcoh(&["strips", &prof, "--degree", "2"]));
    assert_eq!(v["reports"][0]["degree"], 2);
    assert_eq!(v["reports"][0]["regions"]["pieces"][0]["status"], "zero");
    assert_eq!(v["reports"][0]["regions"]["pieces"][0]["hi"], "4/3");
    let all = json(&lpcoh(&["strips", &prof]));
    assert_eq!(all["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn budget_and_decay() {
    let dir = TempDir::new().unwrap();
    let v = json(&lpcoh(&["budget", &file(&dir, "s.json", STRAIGHT)]));
    assert_eq!(v["budget"]["plus_threshold"], "3");
    let v = json(&lpcoh(&[
        "sl3-decay",
        "--p",
        "3",
        "--pattern",
        "gdy",
        "--direction",
        "+",
    ]));
    assert_eq!(
        v["certificate"]["rates"],
        serde_json::json!(["1/2", "7/2", "1"])
    );
    let v = json(&lpcoh(&[
        "sl3-decay",
        "--p",
        "3",
        "--pattern",
        "gdy",
        "--direction",
        "-",
    ]));
    assert!(v["certificate"].is_null());
    let v = json(&lpcoh(&[
        "lemma-num",
        "--a",
        "1",
        "--b",
        "2",
        "--A",
        "4",
        "--B",
        "1",
        "--numeric-check",
    ]));
    assert!((v["f_min"].as_f64().unwrap() - 4.76220).abs() < 1e-5);
}

#[test]
fn heis_commands() {
    let v = json(&lpcoh(&["heis", "lefschetz", "--m", "3"]));
    let ranks = v["ranks"].as_array().unwrap();
    assert_eq!(ranks.len(), 5);
    assert_eq!(ranks[1]["injective"], true);
    assert_eq!(ranks[1]["surjective"], true);
    let v = json(&lpcoh(&["heis", "d-tau", "--m", "2"]));
    assert_eq!(
        v,
        serde_json::json!([{"monomial": "dx1^dy1", "coeff": "-1"}])
    );
    let v = json(&lpcoh(&[
        "heis",
        "verify",
        "--m",
        "3",
        "--checks",
        "d_squared,fdx",
        "--trials",
        "20",
        "--seed",
        "4",
    ]));
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(v["all_passed"], true);
    assert_eq!(
        lpcoh(&["heis", "verify", "--checks", "nothing"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = lpcoh(&[
        "verify", "all", "--seed", "11", "--trials", "15", "--m", "2",
    ]);
    let b = lpcoh(&[
        "verify", "all", "--seed", "11", "--trials", "15", "--m", "2",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = dir.path().join("report.json");
    let c = lpcoh(&[
        "verify",
        "all",
        "--seed",
        "11",
        "--trials",
        "15",
        "--m",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    let d = lpcoh(&[
        "verify", "all", "--seed", "12", "--trials", "15", "--m", "2",
    ]);
    assert_ne!(a.stdout, d.stdout);
}

#[test]
fn markdown_rendering() {
    let out = lpcoh(&["--format", "md", "table", "sl3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| (1; 2) | zero |  | {4/3} |"));
    assert!(text.contains("Unknown at p ∈ {4/3, 2, 4}."));
}
