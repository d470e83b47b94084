//! End-to-end tests of the `localent` binary: output format, determinism,
//! config-file semantics and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_localent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn localent")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("localent-test-{}-{}", std::process::id(), name));
    p
}

/// Matches one C-style `%.10e` float: `-?d.ddddddddddde[+-]dd`.
fn is_c_float(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let (mant, exp) = match s.split_once('e') {
        Some(pair) => pair,
        None => return false,
    };
    let mant_ok = mant.len() == 12
        && mant.as_bytes()[1] == b'.'
        && mant.chars().enumerate().all(|(i, c)| i == 1 || c.is_ascii_digit());
    let exp_ok = (exp.starts_with('+') || exp.starts_with('-'))
        && exp.len() >= 3
        && exp[1..].chars().all(|c| c.is_ascii_digit());
    mant_ok && exp_ok
}

#[test]
fn density_output_is_deterministic() {
    let args = ["density", "--alpha", "2", "--mode", "thermal", "--temp", "0.3",
        "--center", "0.3,-0.4"];
    let first = run(&args);
    assert!(first.status.success(), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "reruns must be byte-identical");
    let text = String::from_utf8(first.stdout).unwrap();
    for key in ["c =", "n =", "D1 =", "D2 =", "C1 =", "optimal_ratio"] {
        assert!(text.contains(key), "missing `{key}` in:\n{text}");
    }
}

#[test]
fn fig1_csv_format_and_determinism() {
    let out1 = tmp_path("fig1-a.csv");
    let out2 = tmp_path("fig1-b.csv");
    for out in [&out1, &out2] {
        let st = run(&["fig1", "--sizes", "0.2:0.8:lin3", "--grid-n", "64", "--jobs", "2",
            "--out", out.to_str().unwrap()]);
        assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "reruns must be byte-identical");
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "# lengths in (m w)^-1/2, densities in m*w, T in units of w"
    );
    assert_eq!(lines.next().unwrap(), "two_a,S_full_bits,S_twolevel_bits,c_estimate");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4, "bad row: {row}");
        for f in fields {
            assert!(is_c_float(f), "field `{f}` is not %.10e formatted");
        }
    }
    let _ = std::fs::remove_file(out1);
    let _ = std::fs::remove_file(out2);
}

#[test]
fn config_file_is_used_and_flags_override_it() {
    let cfg = tmp_path("density.conf");
    std::fs::write(&cfg, "# test config\nalpha = 2\ntemp = 0.3\nmode = thermal\n").unwrap();
    let from_cfg = run(&["density", "--config", cfg.to_str().unwrap()]);
    assert!(from_cfg.status.success());
    let from_flags =
        run(&["density", "--alpha", "2", "--mode", "thermal", "--temp", "0.3"]);
    assert_eq!(from_cfg.stdout, from_flags.stdout, "config values must match flags");

    // a flag wins over the file entry
    let overridden = run(&["density", "--config", cfg.to_str().unwrap(), "--temp", "0.6"]);
    let plain = run(&["density", "--alpha", "2", "--mode", "thermal", "--temp", "0.6"]);
    assert_eq!(overridden.stdout, plain.stdout);
    assert_ne!(overridden.stdout, from_cfg.stdout);
    let _ = std::fs::remove_file(cfg);
}

#[test]
fn invalid_parameter_exits_2() {
    let st = run(&["density", "--alpha=-1"]);
    assert_eq!(st.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    assert!(!st.stderr.is_empty());

    let st = run(&["fig1", "--sizes", "0:0.1:lin3", "--out", "/dev/null"]);
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3() {
    // a region this large cannot be treated at leading order
    let st = run(&["extract", "--a", "2", "--grid-n", "64"]);
    assert_eq!(st.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&st.stderr));
}

#[test]
fn grid_budget_exits_4() {
    let out = tmp_path("fig1-budget.csv");
    let st = bin()
        .args(["fig1", "--sizes", "0.2:0.8:lin3", "--grid-n", "256",
            "--out", out.to_str().unwrap()])
        .env("LOCALENT_GRID_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    let _ = std::fs::remove_file(out);
}
