use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dimlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn last_stderr_json(out: &Output) -> Value {
    let err = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(err.lines().last().unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const TWO_CONSTANTS: &str = r#"{"x": ["x"], "y": ["zero", "one"], "values": [["0/1", "1/1"]]}"#;

#[test]
fn generated_class_pipes_into_dim() {
    let gen = run(&["gen", "powerset", "3"]);
    let out = run_stdin(&["dim", "vc", "-"], &gen.stdout);
    let v = json(&out);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["kind"], "vc");
}

#[test]
fn missing_input_exits_two_with_json_diagnostic() {
    let out = run(&["dim", "vc", "/nonexistent/class.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(last_stderr_json(&out)["error"], "Io");
}

#[test]
fn malformed_rational_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"x": ["x"], "y": ["a"], "values": [["2/4"]]}"#);
    let out = run(&["dim", "vc", &c]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(last_stderr_json(&out)["error"], "Parse");
}

#[test]
fn resource_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["gen", "powerset", "5"]);
    let c = write(dir.path(), "p5.json", std::str::from_utf8(&gen.stdout).unwrap());
    let out = run(&["game", "realizable", &c, "--T", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(last_stderr_json(&out)["error"], "ClassTooLarge");
}

#[test]
fn agnostic_two_constants_is_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", TWO_CONSTANTS);
    let v = json(&run(&["game", "agnostic", &c, "--T", "1", "--grid", "0,1/2,1", "--labels", "0,1"]));
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["exact"], true);
}

#[test]
fn out_file_gets_manifest_with_input_digest() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", TWO_CONSTANTS);
    let out_path = dir.path().join("dim.json");
    let out = run(&["dim", "littlestone", &c, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["dim"], 1);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("dim.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["tool"], "dimlab");
    assert_eq!(m["inputs"][0]["bytes"], TWO_CONSTANTS.len());
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_accepts_dim_output() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["gen", "threshold", "3"]);
    let c = write(dir.path(), "t.json", std::str::from_utf8(&gen.stdout).unwrap());
    for (kind, vkind, extra) in [("fat", "set", Some("1/4")), ("seq-fat", "seq", Some("1/2")), ("threshold", "threshold", Some("1/2")), ("online", "online", None)] {
        let mut args = vec!["dim", kind, &c];
        if let Some(g) = extra {
            args.extend(["--gamma", g]);
        }
        let dim = run(&args);
        let w = write(dir.path(), "w.json", std::str::from_utf8(&dim.stdout).unwrap());
        let v = json(&run(&["verify", vkind, &c, &w]));
        assert_eq!(v["valid"], true, "{kind}");
    }
}

#[test]
fn bounds_sweep_emits_csv_rows() {
    let out = run(&["bounds", "littlestone-regret", "d=1,4", "T=9", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].ends_with(",6"), "{text}");
}

#[test]
fn unknown_bound_is_rejected() {
    let out = run(&["bounds", "nonesuch", "a=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pac_gc_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["gen", "threshold", "3"]);
    let c = write(dir.path(), "t.json", std::str::from_utf8(&gen.stdout).unwrap());
    let d = write(dir.path(), "d.json", r#"{"support": [0, 1, 2], "weights": ["1/3", "1/3", "1/3"]}"#);
    let args = ["pac", "gc", &c, "--dist", &d, "--m", "5,10", "--eps", "1/4", "--trials", "200", "--seed", "9"];
    let a = json(&run(&args));
    let b = json(&run(&[&args[..], &["--jobs", "3"]].concat()));
    assert_eq!(a, b);
    assert_eq!(a["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn derive_dual_swaps_axes() {
    let gen = run(&["gen", "threshold", "2"]);
    let v = json(&run_stdin(&["derive", "dual", "-"], &gen.stdout));
    let orig: Value = serde_json::from_slice(&gen.stdout).unwrap();
    assert_eq!(v["x"], orig["y"]);
    assert_eq!(v["y"], orig["x"]);
}

#[test]
fn simulate_scripted_adversary_echoes_script() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", TWO_CONSTANTS);
    let s = write(dir.path(), "s.json", r#"[["x", "1/1"], [0, "0/1"]]"#);
    let scripted = format!("scripted:{s}");
    let v = json(&run(&["game", "simulate", &c, "--T", "2", "--learner", "ftl", "--adversary", &scripted]));
    let rounds = v["transcript"]["rounds"].as_array().unwrap();
    assert_eq!(rounds.len(), 2);
    assert_eq!(rounds[0]["y"], "1/1");
    assert_eq!(rounds[1]["y"], "0/1");
}
