use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambda-roots"))
        .args(args)
        .env_remove("LAMBDA_ROOTS_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn scalar_outputs() {
    assert_eq!(stdout(&["lambda", "1"]), "1\n");
    assert_eq!(stdout(&["lambda", "8"]), "2\n");
    assert_eq!(stdout(&["order", "2", "7"]), "3\n");
    assert_eq!(stdout(&["rho1", "--tol", "1e-7"]), "3.4199057\n");
    assert_eq!(stdout(&["rho1", "--tol", "1e-6"]), "3.419906\n");
    assert_eq!(stdout(&["na", "2", "10"]), "4\n");
    assert_eq!(stdout(&["pa", "2", "20"]), "5\n");
}

#[test]
fn record_outputs() {
    assert_eq!(stdout(&["rcount", "8"]), "{\"n\":8,\"r_closed\":3,\"r_brute\":3}\n");
    let mean: Value = serde_json::from_str(&stdout(&["mean", "3"])).unwrap();
    assert_eq!(mean["num"], "11");
    assert_eq!(mean["den"], "6");
    let delta: Value = serde_json::from_str(&stdout(&["delta", "15"])).unwrap();
    assert_eq!(delta["cyclic_orders"], serde_json::json!([2, 4]));
    assert_eq!(delta["r"], 4);
    assert_eq!(stdout(&["rcount", "8", "--format", "csv"]), "n,r_closed,r_brute\n8,3,3\n");
    assert_eq!(stdout(&["rcount", "8", "--format", "plain"]), "n: 8\nr_closed: 3\nr_brute: 3\n");
}

#[test]
fn characters_table() {
    let chars: Value = serde_json::from_str(&stdout(&["characters", "7"])).unwrap();
    let chars = chars.as_array().unwrap();
    assert_eq!(chars.len(), 6);
    let elementary = chars.iter().filter(|c| c["elementary"] == true).count();
    assert_eq!(elementary, 6);
}

#[test]
fn constants_output() {
    let v: Value = serde_json::from_str(&stdout(&["constants", "--digits", "6", "--name", "theorem12"])).unwrap();
    assert_eq!(v[0]["value"], "0.341326");
    let v: Value = serde_json::from_str(&stdout(&["constants", "--digits", "6"])).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[0]["value"], "0.373956");
}

#[test]
fn errors_are_json_on_stderr() {
    for (args, kind) in [
        (vec!["lambda", "0"], "zero_modulus"),
        (vec!["order", "2", "4"], "not_coprime"),
        (vec!["moment2", "100000", "10000"], "budget_exceeded"),
        (vec!["characters", "6000"], "bound_exceeded"),
        (vec!["constants", "--digits", "31"], "invalid_argument"),
        (vec!["frobnicate"], "usage"),
        (vec!["verify", "--suite", "nonsense"], "invalid_argument"),
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty());
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], kind, "{args:?}");
        assert!(err["error"]["message"].is_string());
    }
}

#[test]
fn sweep_rows_in_grid_order() {
    assert_eq!(
        stdout(&["sweep", "--metric", "sigma1", "--x", "2,1"]),
        "x,num,den\n1,0,1\n2,1,4\n"
    );
    assert_eq!(stdout(&["sweep", "--metric", "mean", "--x", "1"]), "x,num,den\n1,1,1\n");
    let csv = stdout(&["sweep", "--metric", "moment2", "--x", "20,10", "--y-eq-x"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "x,y,num,den");
    assert!(lines[1].starts_with("10,10,"));
    assert!(lines[2].starts_with("20,20,"));
    let single = stdout(&["moment2", "10", "10"]);
    let v: Value = serde_json::from_str(&single).unwrap();
    assert_eq!(lines[1], format!("10,10,{},{}", v["num"].as_str().unwrap(), v["den"].as_str().unwrap()));

    let grid = stdout(&["sweep", "--metric", "bsum", "--x", "5,1", "--y", "3,1"]);
    let keys: Vec<&str> = grid.lines().skip(1).map(|l| &l[..3]).collect();
    assert_eq!(keys, ["1,1", "1,3", "5,1", "5,3"]);
}

#[test]
fn sweep_progress_stays_off_stdout() {
    let out = run(&["sweep", "--metric", "mean", "--x", "5,10", "--progress"]);
    assert!(out.status.success());
    let data = String::from_utf8(out.stdout).unwrap();
    assert_eq!(data.lines().count(), 3);
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 2);
}

#[test]
fn sweep_report_columns() {
    let csv = stdout(&["sweep", "--metric", "report", "--x", "20", "--y-eq-x"]);
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "x,y,mean_num,mean_den,m2_num,m2_den,sigma1_num,sigma1_den,phi_phi_sum,diagnostics"
    );
}

#[test]
fn verify_is_deterministic_across_workers() {
    let args = |w: &'static str| {
        vec![
            "verify", "--all", "--workers", w,
            "--cap", "rcount-oracle=400",
            "--cap", "t-expansion=50",
            "--cap", "decomposition=10",
            "--cap", "sigma1-forms=30",
            "--cap", "rho-counts=150",
            "--cap", "lower-bound=2000",
        ]
    };
    let one = stdout(&args("1"));
    let eight = stdout(&args("8"));
    assert_eq!(one, eight);
    let report: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 7);

    let via_env = Command::new(env!("CARGO_BIN_EXE_lambda-roots"))
        .args(&args("1")[..2])
        .args(&args("1")[4..])
        .env("LAMBDA_ROOTS_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), one);
}

#[test]
fn verify_rejects_oversized_caps() {
    let out = run(&["verify", "--suite", "t-expansion", "--cap", "t-expansion=100000"]);
    assert_eq!(out.status.code(), Some(2));
}
