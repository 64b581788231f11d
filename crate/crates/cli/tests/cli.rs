use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tbm_cli::EvidenceDocument;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn tbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tbm_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tbm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn machine(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--machine");
    let out = tbm(&all);
    let code = out.status.code().unwrap();
    (serde_json::from_slice(&out.stdout).expect("machine output is JSON"), code)
}

fn mass_of(evidence: &Value, set: &[&str]) -> f64 {
    evidence["masses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| {
            let got: Vec<&str> = e["set"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
            got == set
        })
        .map(|e| e["mass"].as_f64().unwrap())
        .unwrap_or(0.0)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn combine_zadeh_with_normalization() {
    let zadeh = data("zadeh.json");
    let (v, code) = machine(&["combine", zadeh.to_str().unwrap(), "--normalize"]);
    assert_eq!(code, 0);
    assert_eq!(v["conflict"].as_f64().unwrap(), 0.9999);
    let fused = &v["evidence"][0];
    assert!((mass_of(fused, &[]) - 0.9999).abs() < 1e-12);
    assert!((mass_of(fused, &["b"]) - 0.0001).abs() < 1e-12);
    assert!((mass_of(&v["normalized"], &["b"]) - 1.0).abs() < 1e-12);

    let human = stdout(&tbm(&["combine", zadeh.to_str().unwrap(), "--normalize"]));
    assert!(human.contains("conflict m(∅) = 0.9999"));
    assert!(human.contains("normalized mass (Dempster)"));
}

#[test]
fn combine_single_item_echoes_it() {
    let (v, code) = machine(&["combine", data("worked.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let fused = &v["evidence"][0];
    assert_eq!(fused["masses"].as_array().unwrap().len(), 4);
    assert_eq!(mass_of(fused, &["a"]), 0.2);
    assert_eq!(mass_of(fused, &["b", "c"]), 0.3);
    assert_eq!(mass_of(fused, &["a", "b", "c"]), 0.4);
    assert_eq!(mass_of(fused, &[]), 0.1);
}

#[test]
fn combine_rejects_bad_sums() {
    let out = tbm(&["combine", data("bad_sum.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("\"short\""), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn syntax_errors_point_at_a_line() {
    let out = tbm_stdin(&["combine"], "{\n  \"frame\": [\"a\",\n}");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn normalizing_a_contradiction_exits_3() {
    let (v, code) = machine(&["combine", data("contradiction.json").to_str().unwrap(), "--normalize"]);
    assert_eq!(code, 3);
    assert_eq!(v["normalized"]["error"], "total contradiction");
}

#[test]
fn condition_on_full_frame_is_identity() {
    let (v, code) = machine(&["condition", data("worked.json").to_str().unwrap(), "--set", "a,b,c"]);
    assert_eq!(code, 0);
    let m = &v["evidence"][0];
    assert_eq!(mass_of(m, &["b", "c"]), 0.3);
    assert_eq!(v["conflict_delta"].as_f64().unwrap(), 0.0);
    assert_eq!(v["conflict"].as_f64().unwrap(), 0.1);
}

#[test]
fn condition_on_empty_set_is_total_contradiction() {
    let worked = data("worked.json");
    let (v, code) = machine(&["condition", worked.to_str().unwrap(), "--set", ""]);
    assert_eq!(code, 0);
    assert_eq!(v["conflict"].as_f64().unwrap(), 1.0);
    assert_eq!(v["total_contradiction"], true);
    let human = stdout(&tbm(&["condition", worked.to_str().unwrap(), "--set", "[]"]));
    assert!(human.contains("total contradiction"), "{human}");
}

#[test]
fn condition_worked_example() {
    let (v, _) = machine(&["condition", data("worked.json").to_str().unwrap(), "--set", "a,b"]);
    let m = &v["evidence"][0];
    assert_eq!(mass_of(m, &["a"]), 0.2);
    assert_eq!(mass_of(m, &["b"]), 0.3);
    assert_eq!(mass_of(m, &["a", "b"]), 0.4);
    assert_eq!(mass_of(m, &[]), 0.1);
    assert_eq!(m["masses"].as_array().unwrap().len(), 4);
}

#[test]
fn condition_with_unknown_label_fails() {
    let out = tbm(&["condition", data("worked.json").to_str().unwrap(), "--set", "a,z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("\"z\""));
}

#[test]
fn query_tables() {
    let (v, code) = machine(&["query", data("vacuous.json").to_str().unwrap(), "--queries", "a"]);
    assert_eq!(code, 0);
    assert_eq!(v["queries"][0]["bel"].as_f64().unwrap(), 0.0);
    assert_eq!(v["queries"][0]["pl"].as_f64().unwrap(), 1.0);

    let (v, _) = machine(&[
        "query",
        data("conflicted.json").to_str().unwrap(),
        "--queries",
        "b;a,b",
    ]);
    assert_eq!(v["queries"][0]["bel"].as_f64().unwrap(), 0.0);
    assert!((v["queries"][0]["pl"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert!((v["queries"][1]["bel"].as_f64().unwrap() - 0.8).abs() < 1e-12);
}

#[test]
fn query_betp_flags_the_extension() {
    let (v, code) = machine(&["query", data("conflicted.json").to_str().unwrap(), "--betp"]);
    assert_eq!(code, 0);
    let p = &v["pignistic"];
    assert!((p["renormalized_conflict"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!(p["note"].as_str().unwrap().contains("extension"));
    let total: f64 = p["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["p"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-11);
}

#[test]
fn query_betp_on_contradiction() {
    let path = data("contradiction.json");
    let out = tbm(&["query", path.to_str().unwrap(), "--betp"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("total contradiction"));
    let (v, code) = machine(&["query", path.to_str().unwrap(), "--betp"]);
    assert_eq!(code, 3);
    assert_eq!(v["pignistic"]["error"], "total contradiction");
}

#[test]
fn trace_two_witnesses() {
    let (v, code) = machine(&["trace", data("two_witnesses.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let trail: Vec<f64> = v["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["conflict"].as_f64().unwrap())
        .collect();
    assert_eq!(trail, vec![0.0, 1.0, 0.0]);
    let events: Vec<&str> = v["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["event"].as_str().unwrap())
        .collect();
    assert_eq!(events, vec!["add", "add", "remove"]);
    assert_eq!(mass_of(&v["evidence"][0], &["a"]), 1.0);
    assert_eq!(v["report"]["most_conflicting"], Value::Null);
}

#[test]
fn trace_empty_script() {
    let (v, code) = machine(&["trace", data("empty_script.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(v["history"].as_array().unwrap().is_empty());
    assert_eq!(mass_of(&v["evidence"][0], &["a", "b"]), 1.0);
    assert_eq!(v["report"]["conflict"].as_f64().unwrap(), 0.0);
}

#[test]
fn trace_remove_before_add_names_the_id() {
    let out = tbm(&["trace", data("remove_first.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("\"Ev1\"") && err.contains("events[0]"), "{err}");
}

#[test]
fn trace_with_conditioning_events() {
    let script = r#"{
        "frame": ["a", "b", "c"],
        "evidence": [
            {"id": "m", "masses": [{"set": ["a"], "mass": 0.2}, {"set": ["b","c"], "mass": 0.3},
                                   {"set": ["a","b","c"], "mass": 0.4}, {"set": [], "mass": 0.1}]}
        ],
        "events": [{"add": "m"}, {"condition": ["a"]}, {"condition": []}]
    }"#;
    let out = tbm_stdin(&["trace", "-", "--machine"], script);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let trail: Vec<f64> = v["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["conflict"].as_f64().unwrap())
        .collect();
    // conditioning on {a} adds bel({b,c}) = 0.3
    assert_eq!(trail.len(), 3);
    assert!((trail[0] - 0.1).abs() < 1e-12);
    assert!((trail[1] - 0.4).abs() < 1e-12);
    assert_eq!(trail[2], 1.0);
    assert_eq!(v["history"][1]["event"], "condition");
}

#[test]
fn machine_output_is_deterministic() {
    for args in [
        vec!["combine", "zadeh.json", "--normalize"],
        vec!["query", "conflicted.json", "--betp"],
        vec!["trace", "two_witnesses.json"],
    ] {
        let path = data(args[1]);
        let mut full = vec![args[0], path.to_str().unwrap(), "--machine"];
        full.extend(&args[2..]);
        let a = tbm(&full).stdout;
        let b = tbm(&full).stdout;
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}

#[test]
fn fused_output_reads_back_as_a_document() {
    let out = tbm(&["combine", data("zadeh.json").to_str().unwrap(), "--machine"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = EvidenceDocument::parse(&text).unwrap();
    let (frame, items) = doc.resolve().unwrap();
    assert_eq!(items.len(), 1);
    let z = frame.subset(["b"]).unwrap();
    assert!((items[0].mass().mass(&z).unwrap() - 0.0001).abs() < 1e-12);
    assert!((items[0].mass().conflict() - 0.9999).abs() < 1e-12);

    // a second pass through the tool changes nothing
    let again = tbm_stdin(&["combine", "--machine"], &text);
    assert_eq!(again.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(v["conflict"].as_f64().unwrap(), 0.9999);
}

#[test]
fn reads_standard_input() {
    let text = std::fs::read_to_string(data("vacuous.json")).unwrap();
    let out = tbm_stdin(&["query", "--queries", "a"], &text);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("{a}"));
}
