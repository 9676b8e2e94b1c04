use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn popmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popmat"))
        .arg("--no-timing")
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &[u8]) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn fixtures_match_sidecars() {
    let mut seen = 0;
    for entry in fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        if !path.to_string_lossy().ends_with(".expected.json") {
            continue;
        }
        let cases: Vec<Value> = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        for case in cases {
            let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
            let out = popmat(&args);
            assert_eq!(out.status.code(), case["exit"].as_i64().map(|c| c as i32), "{args:?}");
            let got = report(&out);
            assert_eq!(got["result"], case["result"], "{args:?}");
            if let Some(v) = case.get("verification") {
                assert_eq!(&got["verification"], v, "{args:?}");
            }
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn vote_of_a_set_against_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let gen = popmat(&["gen", "random", "--family", "graphic", "--size", "8", "--seed", "3"]);
    assert!(gen.status.success());
    let path = write_temp(&dir, "g.json", &gen.stdout);
    let solved = report(&popmat(&["solve", &path]));
    let set: Vec<&str> = solved["result"]["set"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    let set = set.join(",");
    for weak in [false, true] {
        let mut args = vec!["vote", path.as_str(), "--set-i", &set, "--set-j", &set];
        if weak {
            args.push("--weak");
        }
        let out = popmat(&args);
        assert!(out.status.success());
        assert_eq!(report(&out)["result"]["total"], 0, "weak = {weak}");
    }
}

#[test]
fn check_theorems_passes() {
    let out = popmat(&["check-theorems", "--trials", "10", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("10/10"));
}

#[test]
fn verify_refuses_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    let gen = popmat(&["gen", "random", "--family", "partition", "--size", "14", "--seed", "1"]);
    let path = write_temp(&dir, "big.json", &gen.stdout);
    let out = popmat(&["solve", "--verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("14"));
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "bad.json", b"{\"version\": 1, \"ground\": [\"a\",");
    let out = popmat(&["solve", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = popmat(&["kernel", "does-not-exist.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generation_is_byte_stable() {
    for family in ["partition", "graphic", "explicit"] {
        let args = ["gen", "random", "--family", family, "--size", "9", "--seed", "42"];
        assert_eq!(popmat(&args).stdout, popmat(&args).stdout);
    }
    let args = ["check-theorems", "--trials", "3", "--seed", "5"];
    assert_eq!(popmat(&args).stdout, popmat(&args).stdout);
}

#[test]
fn generated_gadgets_match_fixtures() {
    let q1 = popmat(&["lex", "gen-example1", "--q", "1"]);
    assert_eq!(q1.stdout, fs::read(fixtures().join("example1_q1.json")).unwrap());
    let q2 = popmat(&["lex", "gen-example1", "--q", "2", "--dummies"]);
    assert_eq!(q2.stdout, fs::read(fixtures().join("example1_q2_dummies.json")).unwrap());
    let x3c = popmat(&["lex", "gen-x3c", "--sets", "1,2,3;1,2,3;1,2,3", "--cover", "1"]);
    assert_eq!(x3c.stdout, fs::read(fixtures().join("x3c_n1.json")).unwrap());
}

#[test]
fn dominate_finds_the_gadget_witness() {
    let out = popmat(&["lex", "dominate", "example1_q1.json", "--matching", "u1:v2,u2:v2,u3:v1,u4:v1"]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["status"], "dominated");
    assert_eq!(r["result"]["witness"], "u1:v1,u2:v1,u3:v2,u4:v2");
}

#[test]
fn exhausted_budget_reports_incomplete() {
    let out = popmat(&["lex", "verify", "x3c_n1.json", "--budget", "0"]);
    let code = out.status.code();
    let status = report(&out)["result"]["status"].clone();
    assert!(
        (code == Some(4) && status == "incomplete") || (code == Some(0) && status == "dominated"),
        "{code:?} {status}"
    );
}

#[test]
fn equalize_adds_fixed_dummy_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = popmat(&["lex", "equalize", "example1_q1.json"]);
    assert!(out.status.success());
    let file: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(file["metadata"]["fixed"], "x:x.d1,u1:u1.d1,u4:u4.d1");
    let agents = file["bmatching"]["agents"].as_array().unwrap();
    assert_eq!(agents.len(), 10);
    assert!(agents.iter().all(|a| a["capacity"] == 2));
    let path = write_temp(&dir, "eq.json", &out.stdout);
    let again = popmat(&["lex", "equalize", &path]);
    let file2: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(file2["metadata"]["fixed"], "");
}
