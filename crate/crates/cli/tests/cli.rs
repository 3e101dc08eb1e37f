use std::fs;
use std::process::{Command, Output};

use haarlab_cli::Report;
use haarlab_core::product::{rect, StepFuncVec2D};
use haarlab_core::{Rat, VecQ};
use serde_json::Value;

fn haarlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haarlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const APPROX: &[&str] = &["haar-approx", "--group", "real_add", "--k0", "[0,1]", "--target", "[0,2)", "--n-max", "10"];

#[test]
fn haar_approx_reports_the_closed_form() {
    let out = haarlab(APPROX);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let last = &v["result"]["values"][9];
    assert_eq!(last["n"], 10);
    assert_eq!(last["prehaar"], "1025/513");
    assert_eq!(v["result"]["target_hull"], "[0,2]");
    assert_eq!(v["result"]["reference"], "2");
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn multiplicative_group_is_near_log_ratio() {
    let out = haarlab(&["haar-approx", "--group", "pos_mul", "--k0", "[1,2]", "--target", "[1,4]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let h: f64 = v["result"]["values"][9]["decimal"].as_str().unwrap().parse().unwrap();
    assert!((h - 2.0).abs() <= 0.02, "{h}");
}

#[test]
fn fubini_three_ways_agree() {
    let q = |s: &str| -> Rat { s.parse().unwrap() };
    let f = StepFuncVec2D::new(
        2,
        vec![
            (rect(q("0"), q("1"), q("0"), q("1")).unwrap(), VecQ::from_ints(&[1, 0])),
            (rect(q("1"), q("2"), q("0"), q("1")).unwrap(), VecQ::from_ints(&[-2, 1])),
        ],
    )
    .unwrap();
    let text = serde_json::to_string(&f).unwrap();
    let out = haarlab(&["fubini-check", "--f", &text]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["double"], "(-1, 1)");
    assert_eq!(v["result"]["double"], v["result"]["iterated_x"]);
    assert_eq!(v["result"]["double"], v["result"]["iterated_y"]);
}

#[test]
fn malformed_set_is_an_input_error() {
    let out = haarlab(&["haar-approx", "--k0", "[0,1]", "--target", "[0,1/0)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("target"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_config_field_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cfg.json");
    fs::write(&p, "{\n  \"command\": \"haar-approx\",\n  \"kzero\": \"[0,1]\"\n}\n").unwrap();
    let out = haarlab(&["--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("kzero") && err.contains("line 3"), "{err}");
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("missing").join("out.json");
    let mut args = APPROX.to_vec();
    args.extend(["--out", p.to_str().unwrap()]);
    let out = haarlab(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("output error"));
}

#[test]
fn csv_has_one_row_per_case() {
    let out = haarlab(&[APPROX, &["--format", "csv"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let json_out = json(&haarlab(APPROX));
    let report: Report = serde_json::from_value(json_out).unwrap();
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.headers().unwrap().iter().next(), Some("check"));
    assert_eq!(rd.records().count(), report.case_count());
}

#[test]
fn report_round_trips_and_config_file_matches_flags() {
    let from_flags = haarlab(APPROX);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"command":"haar-approx","group":"real_add","k0":"[0,1]","target":"[0,2)","n_max":10}"#,
    )
    .unwrap();
    let out_path = dir.path().join("r.json");
    let from_file = haarlab(&["--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0));
    let written = fs::read(&out_path).unwrap();
    assert_eq!(written, from_flags.stdout);
    let report: Report = serde_json::from_slice(&written).unwrap();
    assert_eq!(report.to_json().as_bytes(), written.as_slice());
}

#[test]
fn uniqueness_on_a_finite_group() {
    let out = haarlab(&[
        "uniqueness-check",
        "--group",
        "symmetric:3",
        "--nu",
        r#"{"type":"counting","scale":"3"}"#,
        "--k0",
        "[0,1]",
        "--sets",
        "[[0],[1,2,3],[0,1,2,3,4,5]]",
    ]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(0), "{err}");
    assert_eq!(json(&out)["summary"]["fail"], 0);
}

#[test]
fn selftest_is_seed_deterministic_and_threads_do_not_matter() {
    let a = haarlab(&["selftest", "--suite", "haar_lebesgue", "--suite", "numeric", "--seed", "7", "--threads", "1"]);
    let b = haarlab(&["selftest", "--suite", "haar_lebesgue", "--suite", "numeric", "--seed", "7", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = haarlab(&["selftest", "--suite", "haar_lebesgue", "--suite", "numeric", "--seed", "8"]);
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(json(&c)["checks"], json(&a)["checks"]);
}

#[test]
fn unknown_suite_is_rejected() {
    let out = haarlab(&["selftest", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}
