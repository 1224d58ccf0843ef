use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const PENTAGON: &str = "flipdist v1
# fan from vertex 0 to fan from vertex 1
points 5
0 0
4 0
5 3
2 5
-1 3
initial 3
0 1 2
0 2 3
0 3 4
final 3
1 2 3
1 3 4
0 1 4
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flipdist"))
}

struct TempFile(PathBuf);

impl TempFile {
    fn new(name: &str, text: &str) -> Self {
        let path = std::env::temp_dir().join(format!("flipdist-cli-{}-{name}", std::process::id()));
        std::fs::write(&path, text).unwrap();
        TempFile(path)
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_line(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().expect("one JSON line")).unwrap()
}

#[test]
fn validate_accepts_and_rejects() {
    let f = TempFile::new("ok.txt", PENTAGON);
    let out = run(&["validate", f.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n=5 h=5"));

    let bad = TempFile::new("bad.txt", &PENTAGON.replace("0 3 4\nfinal", "0 3 1\nfinal"));
    let out = run(&["validate", bad.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn validate_reads_stdin() {
    let mut child = bin().args(["validate", "-"]).stdin(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(PENTAGON.as_bytes()).unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(0));
}

#[test]
fn distance_engines() {
    let f = TempFile::new("d.txt", PENTAGON);
    let path = f.0.to_str().unwrap();

    let out = run(&["distance", path, "--engine", "oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_line(&out)["result"], 2);

    let out = run(&["distance", path, "--engine", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_line(&out);
    assert_eq!(v["result"]["oracle"], 2);
    assert_eq!(v["result"]["agree"], true);
    assert_eq!(v["k"], 2);

    let out = run(&["distance", path, "--engine", "fpt", "--k", "2", "--pruning", "off"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_line(&out)["result"], "accept");

    let out = run(&["distance", path, "--engine", "fpt", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_line(&out)["result"], "reject");

    let out = run(&["distance", path, "--engine", "fpt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budgets_exit_with_three() {
    let f = TempFile::new("b.txt", PENTAGON);
    let path = f.0.to_str().unwrap();
    assert_eq!(run(&["distance", path, "--engine", "oracle", "--cap", "1"]).status.code(), Some(3));
    assert_eq!(run(&["distance", path, "--engine", "fpt", "--k", "2", "--state-budget", "5"]).status.code(), Some(3));
}

#[test]
fn gen_round_trips_through_validate() {
    let out = run(&["gen", "-n", "7", "--scramble", "3", "--seed", "11", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("flipdist v1"));
    assert!(text.contains("\nk 3"));
    let again = run(&["gen", "-n", "7", "--scramble", "3", "--seed", "11", "--k", "3"]);
    assert_eq!(text.as_bytes(), &again.stdout[..]);
    let f = TempFile::new("g.txt", &text);
    assert_eq!(run(&["validate", f.0.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn dag_text_and_json() {
    let f = TempFile::new("dag.txt", PENTAGON);
    let path = f.0.to_str().unwrap();
    let out = run(&["dag", path, "--flips", "0-2 0-3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("nodes 2"), "{text}");
    assert!(text.contains("digraph"));

    let out = run(&["dag", path, "--flips", "0-2;0-3", "--json"]);
    let v = json_line(&out);
    assert_eq!(v["reaches_final"], true);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
    assert_eq!(v["arcs"], serde_json::json!([[1, 2]]));
    assert_eq!(v["components"][0]["essentiality"], "essential");

    assert_eq!(run(&["dag", path, "--flips", "0-1"]).status.code(), Some(2));
    assert_eq!(run(&["dag", path, "--flips", "zero-two"]).status.code(), Some(2));
}

#[test]
fn bench_emits_one_row_per_trial() {
    let out = run(&["bench", "-n", "6", "--trials", "4", "--scramble", "3", "--seed", "5", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["agree"] == true && r["n"] == 6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("agreement=100.0%"));
}

#[test]
fn bench_config_file() {
    let cfg = TempFile::new(
        "bench.json",
        r#"{"suites":[{"n":5,"scramble":2,"trials":3,"seed":1,"shape":"polygon"}],"cap":10,"pruning":false}"#,
    );
    let out = run(&["bench", cfg.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
}
