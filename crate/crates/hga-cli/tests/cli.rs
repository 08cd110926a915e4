//! End-to-end tests driving the compiled `hga` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hga"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn hga");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .expect("stdin piped")
            .write_all(text.as_bytes())
            .expect("write stdin");
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("wait for hga")
}

fn run_json(args: &[&str], stdin: Option<&str>) -> (Value, Output) {
    let out = run(args, stdin);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let value: Value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}) in: {stdout}"));
    (value, out)
}

fn get_f64(report: &Value, path: &[&str]) -> f64 {
    let mut cur = report;
    for key in path {
        cur = &cur[*key];
    }
    cur.as_f64()
        .unwrap_or_else(|| panic!("{} is not a number: {cur}", path.join(".")))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

const G123: &str = "1.8171205928321397"; // 6^(1/3)
const H123: &str = "1.6363636363636364"; // 18/11

#[test]
fn threshold_solves_its_equation() {
    let (report, out) = run_json(&["threshold"], None);
    assert!(out.status.success());
    let t0 = get_f64(&report, &["t0"]);
    assert!(rel(t0, 0.27846454276107379511) < 1e-14);
    let residual = get_f64(&report, &["residuals", "threshold_equation"]);
    assert!(residual.abs() <= 1e-12);
    assert_eq!(report["version"].as_str().unwrap(), env!("CARGO_PKG_VERSION"));
    // Envelope keys are always present.
    for key in ["inputs", "bounds", "witnesses", "residuals", "command"] {
        assert!(report.get(key).is_some(), "missing envelope key {key}");
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let out = run(&["threshold"], None);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("2.7846454276107380e-1"),
        "t0 not printed with 17 digits: {stdout}"
    );
}

#[test]
fn bound_h_matches_the_equal_weight_fixture() {
    let (report, out) = run_json(&["bound-h", "--a", "2", "--g", G123, "--equal", "3"], None);
    assert!(out.status.success());
    assert!(rel(get_f64(&report, &["bounds", "lower"]), 1.6142565034031841792) < 1e-12);
    assert!(rel(get_f64(&report, &["bounds", "upper"]), 1.6788016266972938901) < 1e-12);
    assert!(get_f64(&report, &["residuals", "max"]) < 1e-11);
    assert_eq!(report["clamped"], Value::Bool(false));
    assert_eq!(report["witnesses"].as_array().unwrap().len(), 2);
}

#[test]
fn bound_g_half_weight_identity() {
    // alpha = 1/2 collapses the interval to sqrt(h a) = 0.8.
    let (report, out) = run_json(
        &["bound-g", "--a", "1", "--h", "0.64", "--weights", "0.5,0.5"],
        None,
    );
    assert!(out.status.success());
    assert!(rel(get_f64(&report, &["bounds", "lower"]), 0.8) < 1e-12);
    assert!(rel(get_f64(&report, &["bounds", "upper"]), 0.8) < 1e-12);
}

#[test]
fn bound_a_matches_the_dual_fixture() {
    let (report, out) = run_json(&["bound-a", "--h", H123, "--g", G123, "--equal", "3"], None);
    assert!(out.status.success());
    assert!(rel(get_f64(&report, &["bounds", "lower"]), 1.979978122789897175) < 1e-12);
    assert!(rel(get_f64(&report, &["bounds", "upper"]), 2.0705507135013488639) < 1e-12);
}

#[test]
fn means_reads_csv_and_bounds_contain_the_withheld_mean() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "value,weight\n1,0.2\n2,0.3\n3,0.5").unwrap();
    let path = file.path().to_str().unwrap().to_string();

    let (report, out) = run_json(&["means", &path], None);
    assert!(out.status.success());
    let h = get_f64(&report, &["means", "h"]);
    let g = get_f64(&report, &["means", "g"]);
    let a = get_f64(&report, &["means", "a"]);
    assert!(rel(h, 1.9354838709677419355) < 1e-12);
    assert!(rel(g, 2.1324046753679739217) < 1e-12);
    assert!(rel(a, 2.3) < 1e-12);

    // Round trip: the bounds computed from (a, g) must contain h.
    let (bounds, out) = run_json(
        &[
            "bound-h",
            "--a",
            &format!("{a:.17e}"),
            "--g",
            &format!("{g:.17e}"),
            "--weights",
            "0.2,0.3,0.5",
        ],
        None,
    );
    assert!(out.status.success());
    let lower = get_f64(&bounds, &["bounds", "lower"]);
    let upper = get_f64(&bounds, &["bounds", "upper"]);
    assert!(lower <= h * (1.0 + 1e-12) && h * (1.0 - 1e-12) <= upper);
}

#[test]
fn means_reads_json_from_stdin_with_equal_weights() {
    let (report, out) = run_json(&["means", "-"], Some("{\"values\": [1, 2, 3]}"));
    assert!(out.status.success());
    assert!(rel(get_f64(&report, &["means", "h"]), 18.0 / 11.0) < 1e-12);
    assert!(rel(get_f64(&report, &["means", "g"]), 1.8171205928321396589) < 1e-12);
    assert!(rel(get_f64(&report, &["means", "a"]), 2.0) < 1e-12);
}

#[test]
fn simple_agrees_with_the_library() {
    let (report, out) = run_json(
        &["simple", "--a", "2", "--g", G123, "--alpha", "0.3333333333333333"],
        None,
    );
    assert!(out.status.success());
    let expected =
        hga_core::simple::harmonic_lower(2.0, G123.parse().unwrap(), 0.3333333333333333).unwrap();
    assert!(rel(get_f64(&report, &["bounds", "lower"]), expected) < 1e-15);
    assert_eq!(report["kind"].as_str().unwrap(), "harmonic-lower");

    let (report, out) = run_json(
        &[
            "simple", "--h", H123, "--a", "2", "--alpha", "0.3333333333333333", "--n", "3",
        ],
        None,
    );
    assert!(out.status.success());
    let interval = hga_core::simple::geometric_interval(
        H123.parse().unwrap(),
        2.0,
        0.3333333333333333,
        3,
    )
    .unwrap();
    assert!(rel(get_f64(&report, &["bounds", "lower"]), interval.lower) < 1e-15);
    assert!(rel(get_f64(&report, &["bounds", "upper"]), interval.upper) < 1e-15);
    assert!(rel(get_f64(&report, &["factor"]), interval.factor) < 1e-15);

    let (report, out) = run_json(
        &["simple", "--h", H123, "--g", G123, "--alpha", "0.3333333333333333"],
        None,
    );
    assert!(out.status.success());
    let expected = hga_core::simple::arithmetic_upper(
        H123.parse().unwrap(),
        G123.parse().unwrap(),
        0.3333333333333333,
    )
    .unwrap();
    assert!(rel(get_f64(&report, &["bounds", "upper"]), expected) < 1e-15);
}

#[test]
fn simple_requires_exactly_two_means() {
    let out = run(
        &["simple", "--a", "2", "--alpha", "0.25"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let out = run(
        &["simple", "--a", "2", "--g", "1.5", "--h", "1.2", "--alpha", "0.25"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify", "--kind", "ga", "--n", "4", "--trials", "5", "--samples", "50", "--seed", "7",
    ];
    let (report, out) = run_json(&args, None);
    assert!(out.status.success());
    assert_eq!(report["ok"], Value::Bool(true));
    assert_eq!(report["passed"].as_u64().unwrap(), 5);
    assert!(get_f64(&report, &["residuals", "max_lower_error"]) < 1e-6);

    let again = run(&args, None);
    assert_eq!(out.stdout, again.stdout, "same seed, different report");
}

#[test]
fn verify_covers_every_kind() {
    for kind in ["ha", "ag", "hg"] {
        let out = run(
            &[
                "verify", "--kind", kind, "--weights", "0.2,0.3,0.5", "--trials", "3",
            ],
            None,
        );
        assert!(out.status.success(), "kind {kind} failed");
    }
}

#[test]
fn trace_inv_bound_diagonal_fixture() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "3\n1 0 0\n0 2 0\n0 0 3").unwrap();
    let path = file.path().to_str().unwrap().to_string();

    let (report, out) = run_json(&["trace-inv-bound", &path], None);
    assert!(out.status.success());
    assert!(rel(get_f64(&report, &["bounds", "upper"]), 3.3121878856393634902) < 1e-12);
    assert!(rel(get_f64(&report, &["bounds", "lower"]), 1.5) < 1e-15);
    assert!(rel(get_f64(&report, &["trace_inverse"]), 11.0 / 6.0) < 1e-12);
    assert_eq!(report["holds"], Value::Bool(true));
}

#[test]
fn poly_bound_inline_file_and_roots_agree() {
    let (inline, out) = run_json(&["poly-bound", "1,-6,11,-6"], None);
    assert!(out.status.success());
    assert!(rel(get_f64(&inline, &["bounds", "lower"]), 9.0) < 1e-13);
    assert!(rel(get_f64(&inline, &["bounds", "upper"]), 19.873127313836180941) < 1e-13);
    assert!(rel(get_f64(&inline, &["observed"]), 11.0) < 1e-15);

    let (roots, out) = run_json(&["poly-bound", "-", "--from-roots"], Some("[1, 2, 3]"));
    assert!(out.status.success());
    assert_eq!(inline["bounds"], roots["bounds"]);
    assert_eq!(inline["observed"], roots["observed"]);

    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "[1, -6, 11, -6]").unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let (from_file, out) = run_json(&["poly-bound", &path], None);
    assert!(out.status.success());
    assert_eq!(inline["bounds"], from_file["bounds"]);
}

#[test]
fn exit_codes_separate_failure_kinds() {
    // Infeasible: g > a.
    let out = run(&["bound-h", "--a", "1", "--g", "1.5", "--equal", "2"], None);
    assert_eq!(out.status.code(), Some(2));

    // Malformed: missing file.
    let out = run(&["means", "/nonexistent/sample.csv"], None);
    assert_eq!(out.status.code(), Some(1));

    // Malformed: a CSV field that does not parse, named by line.
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "value,weight\n1,0.5\noops,0.5").unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let out = run(&["means", &path], None);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "diagnostic lacks the line: {stderr}");

    // Malformed: genuinely asymmetric matrix.
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "2\n1 5\n1 1").unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let out = run(&["trace-inv-bound", &path], None);
    assert_eq!(out.status.code(), Some(1));

    // Infeasible: not positive definite (with a positive trace, so the
    // failure comes from the factorization).
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "2\n3 0\n0 -1").unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let out = run(&["trace-inv-bound", &path], None);
    assert_eq!(out.status.code(), Some(2));

    // Verification failure: coefficients that no positive-root polynomial
    // produces break the bound and exit 3.
    let out = run(&["poly-bound", "1,-1,100,-1"], None);
    assert_eq!(out.status.code(), Some(3));

    // Oracle size cap.
    let out = run(
        &["verify", "--kind", "ga", "--n", "40", "--trials", "1"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn near_degenerate_ratio_is_clamped_and_flagged() {
    let (report, out) = run_json(
        &["bound-h", "--a", "1", "--g", "1.0000000001", "--equal", "2"],
        None,
    );
    assert!(out.status.success());
    assert_eq!(report["clamped"], Value::Bool(true));
    assert!(rel(get_f64(&report, &["bounds", "lower"]), 1.0) < 1e-12);
    assert!(rel(get_f64(&report, &["bounds", "upper"]), 1.0) < 1e-12);
}

#[test]
fn text_format_emits_flat_keys() {
    let out = run(
        &[
            "bound-h", "--a", "2", "--g", G123, "--equal", "3", "--format", "text",
        ],
        None,
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("bounds.lower = 1.6142565034031842e+0"));
    assert!(stdout.contains("bounds.upper = 1.6788016266972938e+0"));
    assert!(stdout.contains("command = bound-h"));
}
