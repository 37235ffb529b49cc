use std::process::{Command, Output};

use bwdecay_core::scan::{parse_csv, parse_json, Method};

fn bwdecay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwdecay"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_field(o: &Output, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v[key].as_f64().unwrap()
}

#[test]
fn scan_is_byte_for_byte_reproducible() {
    let args = ["scan", "--beta", "10", "--tau-min", "0.01", "--tau-max", "40", "--points", "200"];
    let a = bwdecay(&args);
    let b = bwdecay(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# beta="));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.method == Method::Exact));
}

#[test]
fn metadata_can_be_suppressed() {
    let o = bwdecay(&["scan", "--beta", "2", "--points", "5", "--no-metadata"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("tau,p,kappa,gamma_ratio,re_h,im_h,method\n"));
}

#[test]
fn zero_time_rows_have_empty_energy_fields() {
    let o = bwdecay(&[
        "scan", "--beta", "2", "--tau-min", "0", "--tau-max", "1", "--points", "3", "--grid", "linear",
        "--no-metadata",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    assert!(first.ends_with(",,,,,exact"), "{first}");
    let o = bwdecay(&[
        "scan", "--beta", "2", "--tau-min", "0", "--tau-max", "1", "--points", "3", "--grid", "linear",
        "--output", "json",
    ]);
    let doc = parse_json(&stdout(&o)).unwrap();
    assert_eq!(doc.rows[0].p, 1.0);
    assert!(doc.rows[0].kappa.is_none());
    let raw: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(raw["rows"][0]["gamma_ratio"].is_null());
}

#[test]
fn writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let o = bwdecay(&["scan", "--beta", "2", "--points", "10", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows = parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 10);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["scan", "--beta", "10", "--points", "1"],
        vec!["scan", "--beta", "10", "--tau-min", "0", "--method", "quadrature", "--grid", "linear"],
        vec!["scan", "--beta", "10", "--tau-min", "0"],
        vec!["scan", "--beta", "10", "--tau-min", "5", "--tau-max", "1"],
        vec!["scan", "--beta", "10", "--terms", "6"],
        vec!["scan", "--beta", "10", "--grid", "cubic"],
        vec!["scan", "--beta", "10", "--method", "quadrature", "--rel-tol", "0"],
        vec!["scan"],
        vec!["info", "--beta", "-1"],
        vec!["info", "--e0", "1", "--emin", "2"],
        vec!["info", "--beta", "2", "--e0", "2"],
        vec!["info", "--beta", "2", "--gamma0", "0"],
        vec!["info", "--beta", "2", "--config", "/nonexistent/bw.conf"],
        vec!["crossover", "--beta", "10", "--terms", "5"],
        vec!["crossover", "--beta", "10", "--amp-const", "0"],
        vec!["frobnicate"],
    ] {
        let o = bwdecay(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn solver_failure_exits_with_three() {
    // a tiny A keeps the exponential part below the tail over the whole scan range
    let o = bwdecay(&["crossover", "--beta", "10", "--amp-const", "1e-300"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(String::from_utf8_lossy(&o.stderr).contains("numerical failure"));
}

#[test]
fn crossover_examples() {
    let t = |extra: &[&str]| {
        let mut args = vec!["crossover", "--output", "json"];
        args.extend_from_slice(extra);
        let o = bwdecay(&args);
        assert!(o.status.success());
        json_field(&o, "tau_t")
    };
    let t10 = t(&["--beta", "10"]);
    assert!((t10 - 18.76).abs() < 0.1);
    assert!((t(&["--beta", "2"]) - 11.45).abs() < 0.1);
    let t10_2 = t(&["--beta", "10", "--terms", "2"]);
    assert!((t10_2 / t10 - 1.0).abs() < 0.02);
    let text = stdout(&bwdecay(&["crossover", "--beta", "10"]));
    assert!(text.contains("tau_T") && text.contains("bracket") && text.contains("residual"));
    let csv = stdout(&bwdecay(&["crossover", "--beta", "10", "--output", "csv"]));
    assert!(csv.starts_with("beta,tau_t,time,bracket_lo,bracket_hi,residual,order,iterations\n"));
}

#[test]
fn info_examples() {
    let o = bwdecay(&["info", "--beta", "2", "--output", "json"]);
    assert!((json_field(&o, "normalization") - 1.08457).abs() < 1e-5);
    assert_eq!(json_field(&o, "reference_gamma_ratio"), 1.0);
    assert_eq!(json_field(&o, "reference_kappa"), 1.0);
    let o = bwdecay(&["info", "--beta", "10", "--gamma0", "0.25", "--hbar", "6.582e-16", "--output", "json"]);
    assert!((json_field(&o, "lifetime") - 6.582e-16 / 0.25).abs() < 1e-28);
    let o = bwdecay(&["info", "--beta", "1e6", "--output", "json"]);
    assert!((json_field(&o, "normalization") - 1.0).abs() < 1e-6);
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# test run\nbeta = 2\npoints = 7\ngrid = linear\ntau-min = 1\ntau-max = 3\n").unwrap();
    let p = path.to_str().unwrap();

    let from_config = parse_csv(&stdout(&bwdecay(&["scan", "--config", p]))).unwrap();
    assert_eq!(from_config.len(), 7);
    assert_eq!(from_config[1].tau, 1.0 + 2.0 / 6.0);

    let overridden = parse_csv(&stdout(&bwdecay(&["scan", "--config", p, "--points", "4"]))).unwrap();
    assert_eq!(overridden.len(), 4);

    let o = bwdecay(&["info", "--config", p, "--beta", "10", "--output", "json"]);
    assert_eq!(json_field(&o, "beta"), 10.0);
    let o = bwdecay(&["info", "--config", p, "--output", "json"]);
    assert_eq!(json_field(&o, "beta"), 2.0);

    std::fs::write(&path, "beta = 2\nbogus = 1\n").unwrap();
    let o = bwdecay(&["info", "--config", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn quadrature_and_exact_scans_agree() {
    let common = ["--beta", "10", "--tau-min", "0.01", "--tau-max", "50", "--points", "60", "--no-metadata"];
    let mut e = vec!["scan"];
    e.extend_from_slice(&common);
    let mut q = e.clone();
    q.extend_from_slice(&["--method", "quadrature"]);
    let e = parse_csv(&stdout(&bwdecay(&e))).unwrap();
    let q = parse_csv(&stdout(&bwdecay(&q))).unwrap();
    for (a, b) in e.iter().zip(&q) {
        assert!((a.p - b.p).abs() <= 1e-6 * a.p + 1e-12, "tau {}", a.tau);
    }
}
