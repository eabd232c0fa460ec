use std::process::Output;

use assert_cmd::Command;
use serde_json::Value;

const K6554: [u64; 20] = [0, 3, 6, 7, 7, 7, 1, 4, 7, 10, 10, 3, 6, 15, 15, 15, 3, 6, 16, 16];

fn chipfire(args: &[&str]) -> Output {
    Command::cargo_bin("chipfire").unwrap().env_remove("CHIPFIRE_STEP_CAP").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn chips(v: &Value) -> Vec<u64> {
    v["chips"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect()
}

#[test]
fn period_from_chips_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k6554.json");
    let doc = serde_json::json!({"graph": "complete_multipartite:6,5,5,4", "chips": K6554});
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = chipfire(&["period", "--chips-file", path.to_str().unwrap(), "--method", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["stored_state"]["period"], 11);
    assert_eq!(v["constant_memory"]["period"], 11);
    assert_eq!(v["stored_state"]["activity"], "1/11");
}

#[test]
fn chips_file_graph_must_agree_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"graph":"complete:3","chips":[0,1,2]}"#).unwrap();
    let out = chipfire(&["period", "--graph", "cycle:3", "--chips-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_bipartite_prints_sigma_vectors() {
    let out = chipfire(&["construct", "bipartite", "--a", "5", "--b", "7", "--period", "3", "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["graph"], "complete_bipartite:5,7");
    assert_eq!(chips(&v), [1, 2, 7, 7, 7, 1, 2, 5, 5, 5, 5, 5]);
    assert_eq!(v["period"], 3);
}

#[test]
fn construct_output_feeds_period() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = chipfire(&["construct", "cpartite", "--parts", "6,5,5,4", "--j", "1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(chips(&json(&out)), K6554);
    std::fs::write(&path, &out.stdout).unwrap();
    let out = chipfire(&["period", "--chips-file", path.to_str().unwrap()]);
    assert_eq!(json(&out)["period"], 11);
}

#[test]
fn inadmissible_period_exits_four() {
    let out = chipfire(&["construct", "bipartite", "--a", "3", "--b", "3", "--period", "7"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("{1,2,3,4,6}"), "{}", stderr(&out));
}

#[test]
fn unsorted_parts_are_an_input_error() {
    let out = chipfire(&["construct", "cpartite", "--parts", "5,7,3", "--j", "0", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_k22_csv() {
    let out = chipfire(&["enumerate", "--graph", "complete_bipartite:2,2", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("graph,mode,bound,period,count"));
    let mut periods = Vec::new();
    let mut total = 0;
    for line in lines {
        let cells: Vec<&str> = line.rsplitn(3, ',').collect();
        total += cells[0].parse::<u64>().unwrap();
        periods.push(cells[1].parse::<u64>().unwrap());
        assert!(cells[2].starts_with("\"complete_bipartite:2,2\",exhaustive,3;3;3;3"));
    }
    assert_eq!(periods, [1, 2, 4]);
    assert_eq!(total, 4u64.pow(4));
}

#[test]
fn random_enumeration_is_reproducible() {
    let args = ["--seed", "11", "enumerate", "--graph", "complete_bipartite:3,4", "--mode", "random", "--samples", "300"];
    let a = chipfire(&args);
    let b = chipfire(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let mut jobs = vec!["--jobs", "1"];
    jobs.extend_from_slice(&args);
    assert_eq!(chipfire(&jobs).stdout, a.stdout);
}

#[test]
fn bipartite_theorem_passes() {
    let out = chipfire(&["--format", "json", "verify", "bipartite-theorem", "--max-a", "2", "--max-b", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert!(v.as_array().unwrap().iter().all(|r| r["verdict"]["verdict"] == "match"), "{v}");
}

#[test]
fn class_trees_reports_seed() {
    let out = chipfire(&["--seed", "7", "--format", "json", "verify", "class", "--class", "trees", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["suite"]["checks"][0]["violation_count"], 0);
}

#[test]
fn lemma_suite_passes_on_k23() {
    let out = chipfire(&["--format", "csv", "verify", "lemmas", "--a", "2", "--b", "3", "--horizon", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("check,hypothesis_count,violation_count\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0")), "{text}");
}

#[test]
fn simulate_k22() {
    let out = chipfire(&["--format", "json", "simulate", "--graph", "complete_bipartite:2,2", "--chips", "1,2,0,3", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 4);
    assert_eq!(chips(&steps[1]), [2, 1, 1, 2]);
    assert_eq!(steps[0]["firing"], serde_json::json!([1, 3]));
    assert_eq!(steps[3], steps[1].as_object().map(|o| {
        let mut o = o.clone();
        o.insert("step".into(), 3.into());
        Value::Object(o)
    }).unwrap());
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["period", "--graph", "complete:3", "--chips", "1,x,2"][..],
        &["period", "--graph", "complete:3", "--chips", "1,2"],
        &["period", "--graph", "triangle:3", "--chips", "1,2,3"],
        &["period", "--chips", "1,2,3"],
        &["enumerate", "--graph", "complete_bipartite:3,3", "--budget", "10"],
    ] {
        let out = chipfire(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn step_cap_from_environment() {
    let out = Command::cargo_bin("chipfire")
        .unwrap()
        .env("CHIPFIRE_STEP_CAP", "2")
        .args(["period", "--graph", "complete_bipartite:5,7", "--chips", "1,2,7,7,7,1,2,5,5,5,5,5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}
