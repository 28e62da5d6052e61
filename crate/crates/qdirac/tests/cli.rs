//! End-to-end checks of the command-line interface: flag handling, config
//! precedence, output formats and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdirac"))
        .args(args)
        .output()
        .expect("failed to launch qdirac")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qdirac_cli_{}_{name}", std::process::id()))
}

#[test]
fn solve_prints_amplitudes_and_defect() {
    let out = qdirac(&["solve", "--e", "2", "--m", "1", "--va", "1", "--vb", "1", "--a0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("r_tilde"));
    assert!(text.contains("R+T"));
    assert!(text.contains("defect"));
    assert!(text.contains("p = 1.7320508075688772e0"));
}

#[test]
fn solve_below_threshold_exits_with_numeric_code() {
    let out = qdirac(&["solve", "--e", "0.5", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn missing_energy_is_an_argument_error() {
    let out = qdirac(&["solve", "--m", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_is_an_argument_error() {
    let out = qdirac(&["solve", "--nonsense", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = qdirac(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_writes_csv_with_fixed_schema() {
    let path = temp_path("sweep.csv");
    let out = qdirac(&[
        "sweep", "--axis", "e", "--lo", "1.5", "--hi", "3.0", "--steps", "7", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = fs::read_to_string(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("axis_value,R,T,sum,defect"));
    assert_eq!(body.lines().count(), 8);
    let _ = fs::remove_file(&path);
}

#[test]
fn sweep_json_to_stdout_parses_back() {
    let out = qdirac(&[
        "sweep", "--axis", "va", "--e", "2", "--lo", "0", "--hi", "2", "--steps", "5",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: qdirac::sweep::SweepResult = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed.rows.len(), 5);
    assert_eq!(parsed.metadata.steps, 5);
}

#[test]
fn non_energy_sweep_requires_energy() {
    let out = qdirac(&["sweep", "--axis", "va", "--lo", "0", "--hi", "2", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--e is required"));
}

#[test]
fn energy_sweep_below_mass_is_a_numeric_error() {
    let out = qdirac(&["sweep", "--axis", "e", "--lo", "0.5", "--hi", "3.0", "--steps", "5"]);
    // rejected while validating the sweep request
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let cfg = temp_path("config.json");
    fs::write(&cfg, r#"{ "e": 2.0, "va": 2.5, "variant": "common-rhs" }"#).unwrap();

    let out = qdirac(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Va = 2.5"), "config value not used: {text}");
    assert!(text.contains("CommonRhs"));

    let out = qdirac(&["solve", "--config", cfg.to_str().unwrap(), "--va", "3"]);
    let text = stdout(&out);
    assert!(text.contains("Va = 3"), "flag must override config: {text}");

    let _ = fs::remove_file(&cfg);
}

#[test]
fn malformed_config_is_an_argument_error() {
    let cfg = temp_path("bad_config.json");
    fs::write(&cfg, r#"{ "unknown_field": 1 }"#).unwrap();
    let out = qdirac(&["solve", "--e", "2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let _ = fs::remove_file(&cfg);
}

#[test]
fn oracle_subcommand_reports_differences() {
    let out = qdirac(&[
        "oracle", "--e", "2", "--va", "0.5", "--vb", "0.2", "--epsilon", "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("matcher r"));
    assert!(text.contains("complex differences"));
}
