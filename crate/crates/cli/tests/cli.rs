use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

fn covnoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covnoise")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

const ONE_N: &str = r#"{"kind":"constant_one","domain":"N"}"#;

#[test]
fn noise_table_brackets_pi2_over_6() {
    let o = covnoise(&["noise-table", "--matrix", ONE_N, "--n", "0:0", "--l", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,l,value,lower,upper,cutoff\n"));
    let row = &csv_rows(&text)[0];
    let (lo, hi): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
    assert!(lo <= PI * PI / 6.0 && PI * PI / 6.0 <= hi);
}

#[test]
fn unit_chessboard_on_z_is_all_zero() {
    let m = r#"{"kind":"chessboard","domain":"Z","xi":1.0,"orientation":"one_on_odd_sum"}"#;
    let o = covnoise(&["noise-table", "--matrix", m, "--n", "-3:3", "--l", "1,2,3,4"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 28);
    for r in rows {
        let (lo, hi): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(lo <= 0.0 && 0.0 <= hi);
    }
}

#[test]
fn empty_range_is_header_only() {
    let o = covnoise(&["noise-table", "--matrix", ONE_N, "--n", "5:4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,l,value,lower,upper,cutoff\n");
}

#[test]
fn exit_codes() {
    assert_eq!(covnoise(&["noise-table", "--matrix", r#"{"kind":"bogus"}"#]).status.code(), Some(2));
    assert_eq!(covnoise(&["noise-table"]).status.code(), Some(2));
    assert_eq!(covnoise(&["noise-table", "--matrix", ONE_N, "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(covnoise(&["observable", "--matrix", ONE_N, "--interval", "1:0.5"]).status.code(), Some(2));
    let gram = r#"{"kind":"gram","domain":"Z","vectors":{"random":{"dim":3,"seed":1}}}"#;
    let o = covnoise(&["noise-table", "--matrix", gram, "--n", "0:0", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource"));
    assert_eq!(covnoise(&["bogus-command"]).status.code(), Some(2));
}

#[test]
fn window_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_covnoise"))
        .args(["observable", "--matrix", ONE_N, "--interval", "0:pi", "--window", "0:40"])
        .env("COVNOISE_MAX_WINDOW", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn observable_dumps() {
    let o = covnoise(&["observable", "--matrix", ONE_N, "--window", "0:3", "--interval", "0:2*pi", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = v["entries"].as_array().unwrap();
    for (i, row) in e.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let re = z[0].as_f64().unwrap();
            let im = z[1].as_f64().unwrap();
            assert!((re - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15 && im.abs() < 1e-15);
        }
    }

    let o = covnoise(&["observable", "--matrix", ONE_N, "--window", "0:4", "--interval", "0:pi"]);
    for r in csv_rows(&stdout(&o)) {
        let (n, m): (i64, i64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let (re, im): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        let q = n - m;
        let expected_im = if q % 2 != 0 { 1.0 / (PI * q as f64) } else { 0.0 };
        let expected_re = if q == 0 { 0.5 } else { 0.0 };
        assert!((re - expected_re).abs() < 1e-15 && (im - expected_im).abs() < 1e-15, "{n},{m}: {re} {im}");
    }

    let o = covnoise(&["observable", "--matrix", ONE_N, "--window", "0:2", "--interval", "full", "--moment", "2"]);
    for r in csv_rows(&stdout(&o)) {
        if r[0] == r[1] {
            assert!((r[2].parse::<f64>().unwrap() - 4.0 * PI * PI / 3.0).abs() < 1e-13);
        }
    }
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"matrix":{"kind":"constant_one","domain":"Z"},"tolerance":1e-4,"format":"json"}"#).unwrap();
    let o = covnoise(&["noise-table", "--config", cfg.to_str().unwrap(), "--n", "0:0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let width = v[0]["upper"].as_f64().unwrap() - v[0]["lower"].as_f64().unwrap();
    assert!(width <= 2e-4);

    let o = covnoise(&["noise-table", "--config", cfg.to_str().unwrap(), "--n", "0:0", "--format", "csv", "--matrix", ONE_N]);
    let row = &csv_rows(&stdout(&o))[0];
    assert!((row[2].parse::<f64>().unwrap() - PI * PI / 6.0).abs() < 1e-4);

    let m = dir.path().join("m.json");
    fs::write(&m, r#"{"kind":"torus","domain":"N","phases":{"formula":"linear","slope":0.5}}"#).unwrap();
    let out = dir.path().join("out.csv");
    let o = covnoise(&["noise-table", "--matrix", m.to_str().unwrap(), "--n", "0:3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 5);

    fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(covnoise(&["noise-table", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let m = r#"{"kind":"gram","domain":"N","vectors":{"random":{"dim":4,"seed":3}}}"#;
    let args = ["noise-table", "--matrix", m, "--n", "0:20", "--l", "1,2", "--tol", "1e-5", "--format", "json"];
    assert_eq!(covnoise(&args).stdout, covnoise(&args).stdout);
    let args = ["verify", "--suite", "covariance", "--seed", "4"];
    let a = covnoise(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, covnoise(&args).stdout);
}

#[test]
fn verify_suites_pass() {
    for suite in ["chessboard", "torus", "covariance", "noise_diagonal", "schur"] {
        let o = covnoise(&["verify", "--suite", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        let rows = csv_rows(&stdout(&o));
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r[r.len() - 3] == "true"), "{suite}");
    }
}

#[test]
fn failed_check_exits_one() {
    // Shift by a non-multiple of 2π with a bound of zero cannot pass for a generic E(X).
    let m = r#"{"kind":"chessboard","domain":"N","xi":0.5}"#;
    let o = covnoise(&["covariance-check", "--matrix", m, "--interval", "0:1", "--shift", "pi/3", "--bound", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = covnoise(&["covariance-check", "--matrix", m, "--interval", "0:1", "--shift", "pi/3"]);
    assert!(o.status.success());
}

#[test]
fn asymptotic_and_diagonal() {
    let m = r#"{"kind":"chessboard","domain":"N","xi":0.5}"#;
    let o = covnoise(&["asymptotic", "--matrix", m, "--tol", "1e-3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"], "positive_limit");
    assert_eq!(v["samples"].as_array().unwrap().len(), 3);

    let z = r#"{"kind":"chessboard","domain":"Z","xi":0.5}"#;
    let o = covnoise(&["noise-diagonal", "--matrix", z, "--n", "-5:5"]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&stdout(&o)).len(), 11);
}

#[test]
fn schur_reports() {
    let o = covnoise(&["schur-growth", "--r", "5,55"]);
    let rows = csv_rows(&stdout(&o));
    let s5: f64 = rows[0][1].parse().unwrap();
    assert!((s5 - (0.5 + (1.0 + 1.0 / 3.0 + 0.2) / PI)).abs() < 1e-14);
    assert_eq!(covnoise(&["schur-growth", "--r", "4"]).status.code(), Some(2));

    let o = covnoise(&["hadamard", "--p", "1,3"]);
    let rows = csv_rows(&stdout(&o));
    let m3: f64 = rows[1][3].parse().unwrap();
    assert!((m3 - 8f64.sqrt()).abs() < 1e-12);

    let o = covnoise(&["hadamard", "--p", "3", "--block", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 14);
    assert!((v["total_norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}
