use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quartlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn constants_file() -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "explicit-constants.toml"].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn analyze_reports_d4_for_x4_plus_2() {
    let out = run(&["analyze", "--poly", "2,0,0,0", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["meta"]["poly"], "X^4 + 2");
    assert_eq!(v["meta"]["seed"], 5);
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    let galois = v["rows"].as_array().unwrap().iter().find(|r| r["section"] == "galois").unwrap();
    assert_eq!(galois["class"], "D4");
    let nf = v["rows"].as_array().unwrap().iter().find(|r| r["section"] == "normform").unwrap();
    assert_eq!(nf["theta_minpoly"], "x^4 - 8");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["analyze", "--poly", "2,0,0,0", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--poly", "-1,0,0,0"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--poly", "2,0,0,0", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--poly", "2,0,0,0", "--threads", "0"]).status.code(), Some(2));
}

#[test]
fn shipped_constants_pass_and_match_the_built_in_set() {
    let path = constants_file();
    let out = run(&["config", "check", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["identities"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let shipped = std::fs::read_to_string(&path).unwrap();
    assert_eq!(String::from_utf8(run(&["config", "explicit"]).stdout).unwrap(), shipped);
}

#[test]
fn exit_1_iff_some_identity_fails() {
    let out = run(&["config", "check", &constants_file(), "--mutations"]);
    let v = json(&out);
    let any_fail = v["identities"].as_array().unwrap().iter().any(|c| c["pass"] == false);
    assert_eq!(out.status.code(), Some(if any_fail { 1 } else { 0 }));
    let out = run(&["verify", "--poly", "1,1,1,1", "--trials", "4"]);
    let v = json(&out);
    let any_fail = v["identities"].as_array().unwrap().iter().any(|c| c["pass"] == false);
    assert_eq!(out.status.code(), Some(if any_fail { 1 } else { 0 }));
}

#[test]
fn output_is_byte_stable_across_thread_counts() {
    let cases: [&[&str]; 3] = [
        &["scan", "--poly", "2,0,0,0", "--x", "5000"],
        &["gamma", "--poly", "1,1,1,1", "--d", "11:1", "--q", "2", "--side", "30,30,30"],
        &["distrinorm", "--poly", "3,3,0,0", "--format", "csv"],
    ];
    for args in cases {
        let outs: Vec<Vec<u8>> = ["1", "3"]
            .iter()
            .map(|t| {
                let mut a = args.to_vec();
                a.extend(["--threads", t]);
                let o = run(&a);
                assert_eq!(o.status.code(), Some(0), "{args:?}");
                o.stdout
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{args:?}");
    }
}

#[test]
fn out_flag_writes_csv() {
    let dir = std::env::temp_dir().join(format!("quartlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = run(&["scan", "--poly", "2,0,0,0", "--x", "500", "--c", "0,1/2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("c,count,proportion,x"));
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn lattice_reports_direction_identities() {
    let out = run(&["lattice", "--minpoly", "x^4 - 8", "--d", "1,2,3,4", "--b1", "1,0,0,0", "--b2", "0,1,1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["identities"].as_array().unwrap().len(), 5);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 6);
}
