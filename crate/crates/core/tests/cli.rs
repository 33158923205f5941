use std::process::{Command, Output};

use serde_json::Value;

fn elliptic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elliptic"))
        .args(args)
        .env_remove("ELLIPTIC_DEFAULT_TOL")
        .output()
        .expect("run elliptic")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_value(o: &Output) -> f64 {
    stdout(o).split('\t').next().unwrap().trim().parse().unwrap()
}

#[test]
fn series_text_and_json() {
    let o = elliptic(&["series", "P", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t1/1\n1\t-24/1\n2\t-72/1\n");

    let o = elliptic(&["series", "x3", "--order", "2", "--format", "json"]);
    let v: Vec<String> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, ["0/1", "27/1", "-405/1"]);

    let o = elliptic(&["series", "2f1_third", "--order", "1"]);
    assert_eq!(stdout(&o), "0\t1/1\n1\t2/9\n");
}

#[test]
fn series_text_parses_back() {
    let o = elliptic(&["series", "R", "--order", "12"]);
    let s: elliptic_core::QSeries = stdout(&o).parse().unwrap();
    assert_eq!(s, elliptic_core::eisenstein::eisenstein_series(elliptic_core::eisenstein::Eisenstein::R, 12));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["series", "x4", "--order", "0"][..],
        &["series", "E2", "--order", "3"],
        &["verify", "bogus"],
        &["eval", "--fn", "S", "--y", "2"],
        &["invert", "--level", "2", "--x", "0.5"],
        &[],
    ] {
        let o = elliptic(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_1_with_message() {
    let o = elliptic(&["invert", "--level", "3", "--x", "1.0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("modulus"));
    let o = elliptic(&["eval", "--fn", "theta3", "--q", "1.2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_json_lines_have_report_fields() {
    let o = elliptic(&["verify", "moreover-exact", "--order", "12", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let v: Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["max_abs_residual", "params", "pass", "runtime_ms", "suite"]);
        assert_eq!(v["max_abs_residual"], "exact-zero");
        assert_eq!(v["params"]["order"], 12);
    }
}

#[test]
fn verify_failure_exits_1() {
    let o = elliptic(&["verify", "fprime-elliptic", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL fprime-elliptic"));
}

#[test]
fn verify_all_is_deterministic_without_timing() {
    let a = elliptic(&["verify", "all", "--json", "--no-timing"]);
    let b = elliptic(&["verify", "all", "--json", "--no-timing", "--serial"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let suites: std::collections::BTreeSet<String> = stdout(&a)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["suite"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(suites.len(), 12);
}

#[test]
fn eval_and_invert_examples() {
    let q = first_value(&elliptic(&["invert", "--level", "4", "--x", "0.5"]));
    assert!((q - (-std::f64::consts::PI).exp()).abs() < 1e-9);
    let q = first_value(&elliptic(&["invert", "--level", "3", "--x", "0.5"]));
    assert!((q - 0.0266).abs() < 1e-4);

    let f = first_value(&elliptic(&["eval", "--fn", "f", "--q", "0.0", "--theta", "2.0"]));
    assert!((f - 0.25 / 1f64.tan()).abs() < 1e-10);

    let s = first_value(&elliptic(&["eval", "--fn", "S", "--y", "2", "--theta", "3.14159265"]));
    assert!((s - 0.76294).abs() < 1e-4);

    let t = first_value(&elliptic(&["eval", "--fn", "theta3", "--q", "0.05"]));
    assert!((t - 1.1000125).abs() < 1e-7);
}

#[test]
fn eval_output_format() {
    let o = elliptic(&["eval", "--fn", "C1", "--y", "1", "--theta", "0.5+0.25i"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (value, meta) = text.trim_end().split_once('\t').unwrap();
    assert!(value.ends_with('i'), "{value}");
    assert_eq!(meta, "tol=1e-10");
}

#[test]
fn env_overrides_default_tolerance() {
    let o = Command::new(env!("CARGO_BIN_EXE_elliptic"))
        .args(["eval", "--fn", "x4", "--q", "0.1"])
        .env("ELLIPTIC_DEFAULT_TOL", "1e-14")
        .output()
        .unwrap();
    assert!(stdout(&o).trim_end().ends_with("tol=1e-14"));
    let o = Command::new(env!("CARGO_BIN_EXE_elliptic"))
        .args(["eval", "--fn", "x4", "--q", "0.1"])
        .env("ELLIPTIC_DEFAULT_TOL", "loose")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
