use std::path::{Path, PathBuf};

use pic_core::catalogue::{catalogue_entry, two_ahead_graph};
use pic_core::cli::run;
use serde_json::Value;
use tempfile::TempDir;

fn pic(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("pic").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn pic_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, text) = pic(&all);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_cycle_vertices() {
    let dir = TempDir::new().unwrap();
    let e = catalogue_entry("n3-directed-cycle").unwrap();
    let g = write(&dir, "g.json", &e.graph.to_json());
    for (k, v) in e.vertices.iter().enumerate() {
        let sc = write(&dir, &format!("s{k}.json"), &v.scheme.to_json());
        let (code, out) = pic_json(&["verify", "--graph", s(&g), "--scheme", s(&sc)]);
        assert_eq!(code, 0);
        assert_eq!(out["verdict"], "ok");
        assert_eq!(out["command"], "verify");
    }
}

#[test]
fn keyrate_lp_example() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "two_ahead.json", &two_ahead_graph().to_json());
    let (code, out) = pic_json(&["keyrate-lp", "--graph", s(&g)]);
    assert_eq!(code, 0);
    assert_eq!(out["value"], "10/3");
    assert!(out.get("value_approx").is_none());
    let (_, out) = pic_json(&["--approx", "keyrate-lp", "--graph", s(&g)]);
    assert_eq!(out["value"], "10/3");
    assert_eq!(out["value_approx"], "3.333");
    let (code, text) = pic(&["keyrate-lp", "--graph", s(&g), "--approx"]);
    assert_eq!(code, 0);
    assert!(text.contains("value: 10/3 (≈3.333)"), "{text}");
}

#[test]
fn infeasible_structure_reports_witness() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "e.json", r#"{"n":2,"side_info":[[],[]]}"#);
    let (code, out) = pic_json(&["feasible", "--graph", s(&g), "--ks", "11"]);
    assert_eq!(code, 1);
    assert_eq!(out["verdict"], "infeasible");
    assert_eq!(out["witness"], serde_json::json!([1, 2]));
    let (code, text) = pic(&["feasible", "--graph", s(&g), "--ks", "11"]);
    assert_eq!(code, 1);
    assert!(text.contains("verdict: infeasible"));
    let (code, out) = pic_json(&["feasible", "--graph", s(&g), "--ks", "10,01"]);
    assert_eq!(code, 0);
    assert_eq!(out["verdict"], "feasible");
}

#[test]
fn canonical_scheme_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c.json", r#"{"n":3,"side_info":[[2],[3],[1]]}"#);
    let ks = write(&dir, "ks.txt", "110,101,011");
    let (code, out) = pic_json(&["canonical-scheme", "--graph", s(&g), "--ks-file", s(&ks)]);
    assert_eq!(code, 0);
    let sc = write(&dir, "s.json", &out["scheme"].to_string());
    let (code, out) = pic_json(&["verify", "--graph", s(&g), "--scheme", s(&sc)]);
    assert_eq!((code, out["verdict"].as_str()), (0, Some("ok")));
    let (code, out) = pic_json(&["oracle-check", "--graph", s(&g), "--scheme", s(&sc), "--mode", "private"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn human_and_json_agree() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "two_ahead.json", &two_ahead_graph().to_json());
    for cmd in ["mais", "chi-f", "multicast", "weak-subset", "secure-clique-cover"] {
        let (c1, json) = pic_json(&[cmd, "--graph", s(&g)]);
        let (c2, text) = pic(&[cmd, "--graph", s(&g)]);
        assert_eq!(c1, c2, "{cmd}");
        for key in ["value", "verdict"] {
            if let Some(v) = json.get(key) {
                let v = v.as_str().map(String::from).unwrap_or_else(|| v.to_string());
                assert!(text.contains(&format!("{key}: {v}")), "{cmd}: {text}");
            }
        }
    }
}

#[test]
fn catalogue_and_demo() {
    let (code, out) = pic_json(&["catalogue", "verify"]);
    assert_eq!(code, 0);
    assert_eq!(out["vertices"], 86);
    let (code, out) = pic_json(&["four-user-demo"]);
    assert_eq!(code, 0, "{out}");
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c.json", r#"{"n":3,"side_info":[[2],[3],[1]]}"#);
    let (code, out) = pic_json(&["scalar-search", "--graph", s(&g), "--r", "2", "--caps", "110:1,101:1,011:1"]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = pic_json(&["scalar-search", "--graph", s(&g), "--r", "1", "--caps", "110:1,101:1,011:1"]);
    assert_eq!(code, 1);
}

#[test]
fn errors_exit_two() {
    assert_eq!(pic(&["no-such-command"]).0, 2);
    assert_eq!(pic(&["mais", "--graph", "/nonexistent/g.json"]).0, 2);
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.json", r#"{"n":2,"side_info":[[1],[]]}"#);
    assert_eq!(pic(&["mais", "--graph", s(&g)]).0, 2);
}

#[test]
fn tiny_state_limit_is_a_size_error() {
    let dir = TempDir::new().unwrap();
    let e = catalogue_entry("n3-directed-cycle").unwrap();
    let g = write(&dir, "g.json", &e.graph.to_json());
    let sc = write(&dir, "s.json", &e.vertices[0].scheme.to_json());
    let (code, _) = pic(&["oracle-check", "--graph", s(&g), "--scheme", s(&sc), "--state-limit", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn help_lists_every_subcommand() {
    let (code, text) = pic(&["--help"]);
    assert_eq!(code, 0);
    for cmd in [
        "feasible",
        "canonical-scheme",
        "verify",
        "verify-weak",
        "oracle-check",
        "mais",
        "keyrate-lp",
        "sum-key-bracket",
        "polymatroid-check",
        "chi-f",
        "b-fold",
        "multicast",
        "secure-clique-cover",
        "weak-subset",
        "weak-necessary",
        "catalogue",
        "scalar-search",
        "four-user-demo",
        "structures",
    ] {
        assert!(text.contains(&format!("  {cmd} ")), "{cmd} missing from help");
    }
}
