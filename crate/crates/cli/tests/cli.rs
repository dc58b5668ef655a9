use std::process::{Command, Output};

use serde_json::Value;
use walkdet::census::read_census;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkdet")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn analyze_path_is_not_controllable() {
    let o = run(&["--json", "analyze", "Bg"]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!(r["det_signed"], "0");
    assert_eq!(r["controllable"], false);
    assert_eq!(r["criterion_applicable"], false);
    assert_eq!(r["graph6"], "Bg");
}

#[test]
fn input_forms_agree() {
    let a = run(&["--json", "analyze", "Bg"]);
    let b = run(&["--json", "analyze", "--edges", "3; 0 1; 1 2"]);
    let dir = std::env::temp_dir().join(format!("walkdet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("graphs.g6");
    std::fs::write(&file, "Bg\n\n").unwrap();
    let c = run(&["--json", "analyze", "--file", file.to_str().unwrap()]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));

    std::fs::write(&file, "Bg\nBww\n").unwrap();
    let bad = run(&["analyze", "--file", file.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains(":2:") && err.contains("byte 2"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let bad = run(&["analyze", "E\x7fO"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("byte 1"));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--theorem", "4.0"]).status.code(), Some(2));
    assert_eq!(run(&["scan-starters", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["--workers", "0", "census", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["--edges"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_summary() {
    let o = run(&["verify", "--theorem", "2.1", "--n-max", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("n = 6: 0 failures / 156 classes"), "{text}");
    assert!(text.contains("theorem 2.1: 0 failures"));

    for t in ["2.2", "2.3", "2.5", "3.1", "3.2-div"] {
        let o = run(&["--json", "verify", "--theorem", t, "--n-max", "5", "--samples", "3", "--sample-n-max", "8"]);
        assert!(o.status.success(), "{t}");
        assert!(json_lines(&o).iter().all(|r| r["failures"] == 0));
    }
}

#[test]
fn verify_on_given_graphs() {
    let o = run(&["--json", "verify", "--theorem", "2.3", "E@Vg", "EAMw"]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!(r["checked"], 2);
    assert_eq!(r["join_sign_factors"], serde_json::json!([1]));
}

#[test]
fn family_rows() {
    let o = run(&["--json", "family", "E@Vg", "--steps", "5"]);
    assert!(o.status.success());
    let rows = json_lines(&o);
    let dets: Vec<&str> = rows.iter().map(|r| r["actual_abs_det"].as_str().unwrap()).collect();
    assert_eq!(dets, ["8", "8", "16", "16", "32", "32"]);
    assert!(rows.iter().all(|r| r["predicted_abs_det"] == r["actual_abs_det"] && r["condition_c"] == true));
    let ops: Vec<&str> = rows.iter().map(|r| r["op"].as_str().unwrap()).collect();
    assert_eq!(ops, ["none", "union", "join", "union", "join", "union"]);

    let table = stdout(&run(&["family", "E@Vg", "--steps", "2"]));
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn census_json_round_trips_through_loader() {
    let o = run(&["--json", "census", "--n", "5"]);
    assert!(o.status.success());
    let census = read_census(o.stdout.as_slice()).unwrap();
    assert_eq!(census.records().len(), 34);
    assert_eq!(census.dgs_count(), 34);
}

#[test]
fn census_file_feeds_dgs_check() {
    let dir = std::env::temp_dir().join(format!("walkdet-cli-census-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c7.jsonl");
    let p = path.to_str().unwrap();
    assert!(run(&["census", "--n", "7", "--census-file", p]).status.success());
    // the order-7 member of a family whose starter is E@Vg
    let o = run(&["--json", "dgs-check", "F?Cjg", "--census-file", p]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!((r["dgs"].clone(), r["method"].clone()), (Value::Bool(true), "census".into()));

    // a graph with mates: pick any record sharing its fingerprint class
    let census = read_census(std::fs::File::open(&path).unwrap()).unwrap();
    let (_, members) = census.classes().find(|(_, m)| m.len() > 1).unwrap();
    let o = run(&["--json", "dgs-check", &members[0].graph6, "--census-file", p]);
    let r = &json_lines(&o)[0];
    assert_eq!(r["dgs"], false);
    assert_eq!(r["mates"].as_array().unwrap().len(), members.len() - 1);
}

#[test]
fn output_independent_of_workers() {
    let a = run(&["--workers", "1", "--json", "scan-starters", "--n", "6"]);
    let b = run(&["--workers", "3", "--json", "scan-starters", "--n", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["--workers", "1", "census", "--n", "6", "--json"]);
    let b = run(&["--workers", "4", "census", "--n", "6", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sachs_table() {
    let o = run(&["sachs", "Bw"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("x^3 - 3x - 2"));
    assert!(text.contains("matches det(xI - A): yes"));
    let o = run(&["--json", "sachs", "C~"]);
    let r = &json_lines(&o)[0];
    assert_eq!(r["elementary_subgraphs"], serde_json::json!([1, 0, 6, 4, 6]));
    assert_eq!(r["matches"], true);
}
