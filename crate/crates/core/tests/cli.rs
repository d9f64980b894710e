#![allow(clippy::needless_range_loop)]

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const CO2: &str = "CO2 emissions (metric tons per capita)";

fn taucov(args: &[&str]) -> Output {
    taucov_env(args, None)
}

fn taucov_env(args: &[&str], fixture_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_taucov"));
    cmd.args(args).env_remove("TAUCOV_FIXTURE_DIR");
    if let Some(dir) = fixture_dir {
        cmd.env("TAUCOV_FIXTURE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_file(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fit_co2_from_fixture() {
    let o = taucov(&[
        "--no-banner",
        "fit",
        "--fixture",
        "table1",
        "--series",
        CO2,
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["version"], 1);
    let fit = &v["fits"][0];
    assert_eq!(fit["label"], CO2);
    assert_eq!(
        fit["coefficients"]["coefficients"]
            .as_array()
            .unwrap()
            .len(),
        16
    );
    assert!(fit["residual_max_rel"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn fit_constant_series_has_only_b0() {
    let dir = tempfile::tempdir().unwrap();
    let years: Vec<String> = (2000..2008).map(|y| y.to_string()).collect();
    let body = format!(
        "Series Name,{}\nc,{}\n",
        years.join(","),
        ["7.5"; 8].join(",")
    );
    let path = write_file(dir.path(), "constant.csv", &body);
    let o = taucov(&[
        "--no-banner",
        "fit",
        "--input",
        &path,
        "--series",
        "c",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c: Vec<f64> = json(&o)["fits"][0]["coefficients"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(c.len(), 8);
    assert!((c[0] - 7.5).abs() <= 1e-12);
    for v in &c[1..] {
        assert!(v.abs() <= 1e-9, "{c:?}");
    }
}

#[test]
fn duplicate_years_exit_2_with_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "dup_nodes.csv",
        "Series Name,2000,2001,2001\ns,1,2,3\n",
    );
    let o = taucov(&["--no-banner", "fit", "--input", &path]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("row 1") && err.contains("column 4"), "{err}");
}

#[test]
fn unparseable_cell_reports_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "bad.csv", "Series Name,2000,2001\ns,1,x\n");
    let o = taucov(&["--no-banner", "fit", "--input", &path]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("row 2, column 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&taucov(&["fit", "--bogus"])), 1);
    assert_eq!(code(&taucov(&["nonexistent"])), 1);
    assert_eq!(
        code(&taucov(&["--no-banner", "compare", "--method", "both"])),
        1
    );
    assert_eq!(code(&taucov(&["--help"])), 0);
}

#[test]
fn type_guard_needs_force() {
    let o = taucov(&[
        "--no-banner",
        "compare",
        "--method",
        "pearson",
        "--reference",
        "table3",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--force"));
    let o = taucov(&[
        "--no-banner",
        "compare",
        "--method",
        "pearson",
        "--reference",
        "table3",
        "--force",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = taucov(&[
        "--no-banner",
        "compare",
        "--method",
        "tau",
        "--reference",
        "table2",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn matrix_pearson_is_symmetric_with_unit_diagonal() {
    let o = taucov(&[
        "--no-banner",
        "matrix",
        "--fixture",
        "table1",
        "--method",
        "pearson",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let m = &json(&o)["matrices"][0];
    assert_eq!(m["method"], "pearson");
    let e: Vec<Vec<f64>> = serde_json::from_value(m["entries"].clone()).unwrap();
    assert_eq!(e.len(), 8);
    for i in 0..8 {
        assert_eq!(e[i][i], 1.0);
        for j in 0..8 {
            assert_eq!(e[i][j], e[j][i]);
        }
    }
}

#[test]
fn matrix_tau_shows_published_value() {
    let o = taucov(&["--no-banner", "matrix", "--method", "tau"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("tau_covariance"));
    assert!(text.contains("-0.998710332"));
}

#[test]
fn matrix_both_is_one_document() {
    let o = taucov(&[
        "--no-banner",
        "matrix",
        "--method",
        "both",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let methods: Vec<&str> = v["matrices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["tau_covariance", "pearson"]);
}

#[test]
fn exclude_k0_is_honored() {
    let with = json(&taucov(&["--no-banner", "matrix", "--format", "json"]));
    let without = json(&taucov(&[
        "--no-banner",
        "matrix",
        "--format",
        "json",
        "--exclude-k0",
    ]));
    assert_eq!(with["matrices"][0]["k0_included"], true);
    assert_eq!(without["matrices"][0]["k0_included"], false);
    assert_ne!(
        with["matrices"][0]["entries"],
        without["matrices"][0]["entries"]
    );
}

#[test]
fn compare_tau_has_two_variants_of_28_pairs() {
    let o = taucov(&[
        "--no-banner",
        "compare",
        "--fixture",
        "table1",
        "--method",
        "tau",
        "--reference",
        "table3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["version"], 1);
    let variants = v["variants"].as_array().unwrap();
    assert_eq!(variants.len(), 2);
    for var in variants {
        assert_eq!(var["pairs"].as_array().unwrap().len(), 28);
        assert!(var["max_abs_delta"].as_f64().is_some());
        assert!(var["sign_mismatches"].is_array());
    }
    let md = taucov(&["--no-banner", "compare", "--method", "tau"]);
    assert!(String::from_utf8(md.stdout)
        .unwrap()
        .contains("max_abs_delta"));
}

#[test]
fn self_compare_has_zero_deltas() {
    let dir = tempfile::tempdir().unwrap();
    let o = taucov(&[
        "--no-banner",
        "matrix",
        "--method",
        "pearson",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let path = write_file(
        dir.path(),
        "self.csv",
        std::str::from_utf8(&o.stdout).unwrap(),
    );
    let o = taucov(&[
        "--no-banner",
        "compare",
        "--method",
        "pearson",
        "--reference",
        &path,
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let var = &v["variants"][0];
    assert_eq!(var["max_abs_delta"].as_f64(), Some(0.0));
    assert!(var["sign_mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn label_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "ref.csv", "x,a,b\na,1,0.5\nb,0.5,1\n");
    let o = taucov(&[
        "--no-banner",
        "compare",
        "--method",
        "pearson",
        "--reference",
        &path,
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_taucov"))
        .args([
            "--no-banner",
            "matrix",
            "--input",
            "-",
            "--method",
            "pearson",
            "--format",
            "csv",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"Series Name,2000,2001,2002\na,1,2,3\nb,3,2,1\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "pearson,a,b");
    let r: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((r + 1.0).abs() <= 1e-15, "{text}");
}

#[test]
fn decimal_comma_input_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "c.csv",
        "Series Name;2000;2001;2002\na;1,5;2;3\nb;3;2,5;1\n",
    );
    let o = taucov(&[
        "--no-banner",
        "matrix",
        "--input",
        &path,
        "--decimal-comma",
        "--method",
        "pearson",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("pearson;a;b\n"), "{text}");
    assert!(text.contains(','));
}

#[test]
fn fixture_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    write_file(
        dir.path(),
        "table1.csv",
        "Series Name;2000;2001;2002\nup;1;2;3\ndown;3;2;1\n",
    );
    let o = taucov_env(
        &[
            "--no-banner",
            "matrix",
            "--method",
            "pearson",
            "--format",
            "csv",
        ],
        Some(dir.path()),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("pearson,up,down\n"), "{text}");
}

#[test]
fn banner_goes_to_stderr_only() {
    let with = taucov(&["matrix", "--method", "pearson"]);
    let without = taucov(&["--no-banner", "matrix", "--method", "pearson"]);
    assert!(stderr(&with).starts_with("taucov "));
    assert!(stderr(&without).is_empty());
    assert_eq!(with.stdout, without.stdout);
}

#[test]
fn demo_exp() {
    let o = taucov(&["--no-banner", "demo-exp", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let computed = v["computed"].as_f64().unwrap();
    assert_eq!(v["paper"].as_f64(), Some(0.71687));
    assert!((computed - 0.71687).abs() <= 5e-3);
    assert!((v["delta"].as_f64().unwrap() - (computed - 0.71687)).abs() < 1e-15);
    let o = taucov(&["--no-banner", "demo-exp"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("0.71687"));
}

#[test]
fn least_squares_fit() {
    let o = taucov(&[
        "--no-banner",
        "fit",
        "--least-squares",
        "--degree",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["fits"].as_array().unwrap().len(), 8);
    assert_eq!(v["fits"][0]["mode"], "least_squares");
    // Interpolation at a degree that does not match the point count is a data error.
    assert_eq!(code(&taucov(&["--no-banner", "fit", "--degree", "3"])), 2);
}
