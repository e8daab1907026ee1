//! End-to-end tests of the `etalab` binary: output shapes, exit codes,
//! the environment budget override, and byte determinism.

use std::process::{Command, Output};

fn etalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etalab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn density_csv_row_shape() {
    let out = etalab(&[
        "density",
        "--expr",
        "1/eta(1)",
        "--mod",
        "2",
        "--at",
        "1000",
        "--format",
        "csv",
        "--paper-style",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(2).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "1000");
    let count: usize = fields[1].parse().unwrap();
    let delta: f64 = fields[2].parse().unwrap();
    assert!((delta - count as f64 / 1000.0).abs() < 1e-6);
}

#[test]
fn density_wide_layout_matches_published_table_shape() {
    let out = etalab(&[
        "density",
        "--expr",
        "1/eta(1)",
        "--mod",
        "2",
        "--mod",
        "3",
        "--at",
        "1000",
        "--at",
        "2000",
        "--layout",
        "wide",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "X,delta_mod2,delta_mod3");
    assert!(lines[2].starts_with("1000,0."));
    assert!(lines[3].starts_with("2000,0."));
}

#[test]
fn analyze_json_document() {
    let out = etalab(&["analyze", "--expr", "eta(18)^3/eta(1)", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["weight"], 1);
    assert_eq!(v["D"], 18);
    assert_eq!(v["thm1_bound_sq"]["num"], 6);
    assert_eq!(v["holomorphic"], false);
    assert_eq!(v["report"]["group"], "Gamma0");
    assert_eq!(v["report"]["min_order"]["num"], -5);
    assert_eq!(v["report"]["min_order"]["den"], 8);
}

#[test]
fn verify_family_reports_ok() {
    let out = etalab(&[
        "verify", "--family", "han", "--t", "2", "--y", "1", "--z", "0", "--terms", "18",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "OK");

    let out = etalab(&["verify", "--family", "rr", "--terms", "100"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "OK");
}

#[test]
fn negative_z_values_parse() {
    let out = etalab(&[
        "verify", "--family", "han", "--t", "1", "--y", "1", "--z", "-2", "--terms", "12",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn companion_json_checks_pass() {
    let out = etalab(&[
        "companion",
        "--expr",
        "geta(9,0)/geta(6,1)",
        "--p",
        "3",
        "--j",
        "0",
        "--terms",
        "600",
        "--json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["a"], 2);
    assert_eq!(v["f"], "geta(2592,0)^9/geta(23328,0)");
    assert_eq!(v["unit_lemma"], true);
    assert_eq!(v["congruence"], true);
}

#[test]
fn exit_codes() {
    // Usage error: unknown flag.
    let out = etalab(&["density", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    // Domain error: syntax error in the expression, JSON on stderr.
    let out = etalab(&["expand", "--expr", "eta(2)^(1/3)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value = serde_json::from_str(&stderr(&out)).unwrap();
    assert_eq!(v["error"]["kind"], "syntax-error");
    // Success.
    let out = etalab(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn environment_variable_overrides_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_etalab"))
        .args(["density", "--expr", "1/eta(1)", "--mod", "2", "--at", "500"])
        .env("ETALAB_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stderr(&out)).unwrap();
    assert_eq!(v["error"]["kind"], "budget-exceeded");
    // The --cap flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_etalab"))
        .args([
            "density", "--expr", "1/eta(1)", "--mod", "2", "--at", "500", "--cap", "1000",
        ])
        .env("ETALAB_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn byte_identical_output_for_identical_configs() {
    let args = [
        "density",
        "--expr",
        "geta(9,0)/geta(6,1)",
        "--mod",
        "3",
        "--at",
        "500",
        "--format",
        "json",
        "--paper-style",
    ];
    let first = etalab(&args);
    let second = etalab(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_flag_writes_complete_documents_or_nothing() {
    let dir = std::env::temp_dir().join(format!("etalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("table.csv");
    let out = etalab(&[
        "density", "--expr", "1/eta(1)", "--mod", "2", "--at", "100",
        "--output", good.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&good).unwrap();
    assert!(written.starts_with("# 1/eta(1) mod 2\nX,count,delta\n"));

    // A failing run must not create the output file.
    let bad = dir.join("never.csv");
    let out = etalab(&[
        "density", "--expr", "1/eta(1)", "--mod", "2", "--at", "100",
        "--cap", "10", "--output", bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!bad.exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn expand_json_exact_coefficients() {
    let out = etalab(&[
        "expand", "--expr", "1/eta(1)", "--terms", "100", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // p(100) = 190569292, delivered exactly as a string.
    assert_eq!(v["coeffs"][100], "190569292");
    assert_eq!(v["prefix"]["num"], -1);
    assert_eq!(v["prefix"]["den"], 24);
}
