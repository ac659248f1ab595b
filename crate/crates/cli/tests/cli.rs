use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn brauer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = brauer(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn mul_reports_circles() {
    let o = brauer(&["mul", "--n", "2", "{1,2},{1',2'}", "{1,2},{1',2'}"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{1,2},{1',2'}\ncircles=1\n");
    let v = json(&["mul", "{1,2'},{2,1'}", "{1,2'},{2,1'}"]);
    assert_eq!(v["product"], "{1,1'},{2,2'}");
    assert_eq!(v["circles"], 0);
}

#[test]
fn enumerate_counts() {
    let o = brauer(&["enumerate", "--what", "all", "--n", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("count=12\n"));
    let v = json(&["enumerate", "--what", "all", "--n", "4", "--strategy", "backtrack"]);
    assert_eq!(v["count"], 12);
    assert_eq!(v["sections"].as_array().unwrap().len(), 12);
    let v = json(&["enumerate", "--what", "all", "--n", "6"]);
    assert_eq!(v["count"], 1440);
    assert!(v["sections"].is_null());
    assert_eq!(json(&["enumerate", "--what", "canonical", "--n", "6"])["count"], 16);
}

#[test]
fn limits_and_bad_input_exit_two() {
    let o = brauer(&["enumerate", "--what", "all", "--n", "8", "--strategy", "backtrack"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
    let o = brauer(&["mul", "{1,2}", "{1,1'}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = brauer(&["info", "{1,1'},{1,2'}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("used twice"));
    assert_eq!(brauer(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(brauer(&["verify", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn regular_and_alternating_are_not_isomorphic() {
    let dir = tempfile::tempdir().unwrap();
    let r = stdout(&brauer(&["canonical", "--n", "6", "--profile", "regular"]));
    let a = stdout(&brauer(&["canonical", "--n", "6", "--profile", "alternating"]));
    let (rf, af) = (write(dir.path(), "regular6.txt", &r), write(dir.path(), "alternating6.txt", &a));
    let o = brauer(&["iso", "--a", &rf, "--b", &af]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("found=false"));
    let v = json(&["iso", "--a", &rf, "--b", &rf]);
    assert_eq!(v["found"], true);
}

#[test]
fn verification_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = stdout(&brauer(&["canonical", "--n", "5", "--profile", "regular"]));
    let f = write(dir.path(), "good.txt", &good);
    assert_eq!(brauer(&["verify", &f]).status.code(), Some(0));
    assert_eq!(brauer(&["verify", "--fast", &f]).status.code(), Some(0));
    let lines: Vec<&str> = good.lines().collect();
    let broken = lines[..lines.len() - 1].join("\n");
    let bf = write(dir.path(), "broken.txt", &broken);
    let o = brauer(&["verify", &bf]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a cross-section"));
    let bad = write(dir.path(), "bad.txt", "(1,2,1)=0\n(1,3,1)=0\n");
    assert_eq!(brauer(&["canonical", "--n", "5", "--params", &bad]).status.code(), Some(2));
    let invalid = write(
        dir.path(),
        "invalid.txt",
        "(1,2,1)=0\n(1,2,2)=0\n(1,3,1)=1\n(1,4,1)=0\n(2,3,1)=0\n(2,4,1)=0\n(3,4,1)=0\n",
    );
    assert_eq!(brauer(&["canonical", "--n", "6", "--params", &invalid, "--verify"]).status.code(), Some(1));
    let xy = write(dir.path(), "xy.txt", "x=11 y=11\n");
    let o = brauer(&["canonical", "--n", "7", "--params", &xy, "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified"));
}

#[test]
fn json_sections_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["enumerate", "--what", "canonical", "--n", "5"]);
    for (k, doc) in v["sections"].as_array().unwrap().iter().enumerate() {
        let f = write(dir.path(), &format!("s{k}.json"), &doc.to_string());
        let r = json(&["verify", &f]);
        assert_eq!(r["closure_violation_count"], 0);
        assert!(r["missing"].as_array().unwrap().is_empty());
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let one = brauer(&["--threads", "1", "--format", "json", "classify", "--n", "6"]);
    let four = brauer(&["--threads", "4", "--format", "json", "classify", "--n", "6"]);
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .env("BRAUER_THREADS", "2")
        .args(["--format", "json", "classify", "--n", "6"])
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn classify_seven() {
    let v = json(&["classify", "--n", "7"]);
    assert_eq!(v["total"], 5040);
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 2);
    assert!(orbits.iter().all(|o| o["size"] == 2520));
}

#[test]
fn h_and_d_sections() {
    let v = json(&["hsection", "--n", "3"]);
    assert_eq!(v["exists"], true);
    assert_eq!(v["unique"], true);
    assert_eq!(v["section"].as_array().unwrap().len(), 10);
    let v = json(&["hsection", "--n", "4"]);
    assert_eq!(v["exists"], false);
    assert!(v["certificate"]["first"].is_string());

    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "gamma.txt", "m=2\ndom:\ndom: 1\n1 -> 1\ndom: 1 2\n1 -> 1\n2 -> 2\n");
    let v = json(&["dsection", "--n", "5", "--gamma", &g]);
    assert_eq!(v["section"]["elements"].as_object().unwrap().len(), 3);
    assert_eq!(v["report"]["closure_violations"], 0);
    let bad = write(dir.path(), "bad.txt", "m=2\ndom: 1 2\n1 -> 2\n2 -> 1\ndom:\n");
    assert_eq!(brauer(&["dsection", "--n", "4", "--gamma", &bad]).status.code(), Some(1));
    let wrong_m = write(dir.path(), "m3.txt", "m=3\ndom:\n");
    assert_eq!(brauer(&["dsection", "--n", "4", "--gamma", &wrong_m]).status.code(), Some(2));
    assert!(brauer(&["dsection", "--n", "8", "--chain"]).status.success());
}

#[test]
fn render_and_info() {
    let o = brauer(&["render", "{1,2},{3,1'},{4,2'},{3',4'}"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("a: cup {1,2}"));
    let v = json(&["info", "{1,2},{3,1'},{4,2'},{3',4'}"]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["stable_rank"], 0);
    assert_eq!(v["left_cups"], "{1,2}");
}
