//! End-to-end runs of the `absrr` binary.

use std::process::{Command, Output};

fn absrr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_absrr"))
        .args(args)
        .env("ABSRR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = absrr(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn balanced_ternary_commands() {
    assert_eq!(json(&["bt", "encode", "--", "-5"])[0]["numeral"], "T11");
    assert_eq!(json(&["bt", "decode", "1T0"])[0]["value"], "6");
    assert_eq!(json(&["bt", "add", "1T1", "T"])[0]["numeral"], "1T0");
    assert_eq!(json(&["bt", "truncate", "1/2", "2"])[0]["truncation"], "4/9");
}

#[test]
fn divisor_dimensions() {
    let r = json(&["rr", "--divisor", "2:1;lambda=3/2"]);
    assert_eq!(r[0]["exp_deg"], "3");
    assert_eq!(r[0]["h0"], 2);
    assert_eq!(r[0]["consistent"], true);
    assert_eq!(json(&["dim-h0", "--divisor", "2:-2;lambda=1"])[0]["dim_h0"], 0);
    assert_eq!(json(&["dim-h1", "--divisor", ";lambda=1/20"])[0]["dim_h1"], 3);
    assert_eq!(json(&["duality", "--divisor", "3:-1;lambda=7/2"])[0]["consistent"], true);
}

#[test]
fn genset_reports_special_case() {
    let r = json(&["genset", "14"]);
    assert_eq!(r[0]["generators"], serde_json::json!([1, 2, 3, 8]));
    assert_eq!(r[0]["special_case"], "e_ell_zero");
}

#[test]
fn failed_checks_exit_one() {
    let out = absrr(&["genset", "5", "--gens", "1,2", "--verify"]);
    assert_eq!(out.status.code(), Some(1));
    let out = absrr(&["circle-cover", "--lambda", "1/20", "--gens", "1/3,1/9", "--verify"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_input_exits_two() {
    let out = absrr(&["dim-h0", "--divisor", "3:1,2:4;lambda=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 4"));
    let out = absrr(&["dim-h0", "--divisor", "4:1;lambda=1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = absrr(&["oracle", "module", "{not json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--format", "json", "genset", "--max", "300", "--verify"];
    let (a, b) = (absrr(&args), absrr(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = absrr(&[
        "rr-sweep",
        "--lambda-max",
        "6",
        "--primes",
        "2,3",
        "--exp-range=-1..1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("divisor,"));
    assert!(lines.count() > 0);

    let js = dir.path().join("e.json");
    let out = absrr(&["exceptional-e", "--max", "100", "--out", js.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    let ns: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [2, 5, 7, 14, 16, 22, 41, 43, 49, 67]);
}

#[test]
fn oracle_module_from_literal() {
    let spec = r#"{"ambient":{"cyclic":[9]},"mass":"zero","mass_bound":"0","cost":"circle","tol":"1/18"}"#;
    let r = json(&["oracle", "module", spec]);
    assert_eq!(r[0]["dim"], 2);
    let cases = json(&["oracle", "pullback-demo"]);
    let cases = cases.as_array().unwrap();
    assert!(cases.len() >= 20);
    assert!(cases.iter().all(|c| c["agree"] == true));
}
