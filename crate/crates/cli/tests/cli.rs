use std::f64::consts::PI;
use std::process::{Command, Output};

use hypvol::PiPoly;
use serde_json::Value;

fn hypvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypvol")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = hypvol(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn exit_code(args: &[&str]) -> i32 {
    hypvol(args).status.code().expect("exited normally")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

/// The exact rendering parses and agrees with the value within the error estimate.
fn check_exact(rec: &Value) {
    if let Some(s) = rec["exact"].as_str() {
        let exact: PiPoly = s.parse().expect("canonical exact form");
        let gap = (exact.to_f64() - num(rec, "value")).abs();
        assert!(gap <= num(rec, "abs_err_est"), "{rec}: gap {gap}");
    }
}

#[test]
fn expect_examples() {
    let r = ok_json(&["expect", "--dim", "3", "--betas", "-1,-1,-1,-1", "--exponent", "0"]);
    assert!(num(&r, "value").is_finite() && num(&r, "value") > 0.0);
    assert_eq!(r["command"], "expect");

    let r = ok_json(&["expect", "--dim", "2", "--betas", "0,0,0", "--exponent", "-1"]);
    assert_eq!(r["pole_path"], true);

    let r = ok_json(&["expect", "--dim", "3", "--betas", "-1,-1,-1,-1", "--exponent", "-1.99"]);
    let v = num(&r, "value");
    assert!(v < PI / 6.0 && v > 0.9 * PI / 6.0, "{v}");

    let up = ok_json(&["expect", "--dim", "3", "--betas", "0,0.5,1,2,3", "--exponent", "0.5", "--rep", "upper"]);
    let lo = ok_json(&["expect", "--dim", "3", "--betas", "0,0.5,1,2,3", "--exponent", "0.5", "--rep", "lower"]);
    assert_eq!(up["representation"], "upper");
    assert_eq!(lo["representation"], "lower");
    assert!((num(&up, "value") - num(&lo, "value")).abs() < 1e-9);
}

#[test]
fn hypvolume_exact_paths() {
    for (args, exact) in [
        (vec!["--case", "ideal3", "--n", "8"], "197/140*pi"),
        (vec!["--case", "ideal-simplex", "--dim", "5"], "943/942480*pi^2"),
        (vec!["--case", "polygon-beta0", "--n", "3"], "pi - 128/15*pi^-1"),
        (vec!["--case", "ideal2", "--n", "5"], "3*pi"),
    ] {
        let mut full = vec!["hypvolume"];
        full.extend(args);
        let r = ok_json(&full);
        assert_eq!(r["exact"], exact);
        check_exact(&r);
    }
    let r = ok_json(&["hypvolume", "--dim", "3", "--betas", "-1,-1,-1,-1"]);
    assert!((num(&r, "value") - PI / 6.0).abs() < 1e-12);
}

#[test]
fn table_rows_match_known_values() {
    let out = hypvol(&["table", "--case", "ideal3", "--range", "4:8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,value,abs_err_est,exact");
    assert!(!text.contains('\r'));
    let exact: Vec<&str> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(exact, ["1/6*pi", "5/12*pi", "43/60*pi", "21/20*pi", "197/140*pi"]);

    let rows: Value = serde_json::from_slice(
        &hypvol(&["table", "--case", "ideal-simplex", "--range", "2:5", "--format", "json"]).stdout,
    )
    .unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!((num(&rows[0], "value") - PI).abs() < 1e-10);
    assert_eq!(rows[1]["exact"], "1/6*pi");
    assert!(rows[2]["exact"].is_null() && num(&rows[2], "value") > 0.0);
    assert_eq!(rows[3]["exact"], "943/942480*pi^2");
    rows.iter().for_each(check_exact);

    let rows: Value = serde_json::from_slice(
        &hypvol(&["table", "--case", "polygon-beta0", "--range", "3:6", "--format", "json"]).stdout,
    )
    .unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["exact"], "4*pi - 256/3*pi^-1 + 5537792/11025*pi^-3");
    rows.iter().for_each(check_exact);
}

#[test]
fn csv_header_is_stable() {
    for case in ["ideal3", "ideal2", "polygon-beta0"] {
        let out = hypvol(&["table", "--case", case, "--range", "4:4"]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(text.lines().next(), Some("param,value,abs_err_est,exact"));
        assert_eq!(text.lines().count(), 2);
    }
}

#[test]
fn simulate_examples() {
    let r = ok_json(&[
        "simulate",
        "--dim",
        "3",
        "--betas",
        "-1,-1,-1,-1",
        "--oracle",
        "lobachevsky",
        "--samples",
        "100000",
        "--seed",
        "7",
    ]);
    assert!(num(&r, "z_score").abs() <= 3.0, "{r}");
    assert_eq!(r["seed"], 7);
    assert!((num(&r, "target") - PI / 6.0).abs() < 1e-15);

    let r = ok_json(&["simulate", "--dim", "2", "--betas", "-1,-1,-1,-1,-1", "--oracle", "gauss-bonnet"]);
    assert_eq!(num(&r, "stderr"), 0.0);
    assert!((num(&r, "value") - 3.0 * PI).abs() < 1e-9);

    let r = ok_json(&["simulate", "--dim", "3", "--betas", "0,0,0,0,0", "--samples", "20000", "--seed", "3"]);
    assert_eq!(r["params"]["oracle"], "absorption");
    assert!(num(&r, "z_score").abs() <= 4.0, "{r}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["simulate", "--dim", "3", "--betas", "0,0,0,0", "--samples", "5000", "--seed", "11"];
    let a = hypvol(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, hypvol(&args).stdout);
    let threads = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_hypvol")).args(args).env("HYPVOL_THREADS", n).output().unwrap().stdout
    };
    assert_eq!(a, threads("1"));
    assert_eq!(a, threads("4"));
}

#[test]
fn json_round_trips() {
    for args in [
        vec!["hypvolume", "--case", "ideal3", "--n", "6"],
        vec!["expect", "--dim", "2", "--betas", "0,0,0", "--exponent", "-1"],
        vec!["simulate", "--dim", "2", "--betas", "0,0,0,0", "--samples", "2000", "--seed", "2"],
    ] {
        let out = hypvol(&args).stdout;
        let text = String::from_utf8(out).unwrap();
        let v: Value = serde_json::from_str(text.trim_end()).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), text.trim_end());
        check_exact(&v);
    }
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(exit_code(&["table", "--case", "ideal3", "--range", "8:4"]), 2);
    assert_eq!(exit_code(&["expect", "--dim", "1", "--betas", "0,0", "--exponent", "0"]), 2);
    assert_eq!(exit_code(&["expect", "--dim", "2", "--betas", "-2,0,0", "--exponent", "0"]), 2);
    assert_eq!(exit_code(&["simulate", "--dim", "3", "--betas", "0,0,0,0", "--oracle", "gauss-bonnet"]), 2);
    assert_eq!(exit_code(&["simulate", "--dim", "3", "--betas", "0,0,0,0,0", "--oracle", "lobachevsky"]), 2);
    assert_eq!(exit_code(&["hypvolume", "--case", "ideal3"]), 2);
    assert_eq!(exit_code(&["frobnicate"]), 2);
}

#[test]
fn strict_mode_requires_seed() {
    assert_eq!(exit_code(&["--strict", "simulate", "--dim", "2", "--betas", "0,0,0"]), 2);
    let out = hypvol(&["--strict", "simulate", "--dim", "2", "--betas", "0,0,0", "--samples", "100", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_failure_injection_exits_1() {
    let out = hypvol(&["verify", "--quick", "--tolerance-scale", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
    assert!(text.lines().any(|l| l.starts_with("failed: ")));
}

#[test]
fn verify_quick_passes() {
    let out = hypvol(&["verify", "--quick"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}
