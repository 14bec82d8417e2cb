use std::path::{Path, PathBuf};
use std::process::Command;

use wiggler_cli::csv::{first_difference, parse_table};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wiggler"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = dir.join(name);
    let status = bin().args(args).arg("--out").arg(&out).status().unwrap();
    assert!(status.success(), "{args:?}");
    std::fs::read_to_string(out).unwrap()
}

fn check_golden(file: &str, args: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let fresh = run_to(dir.path(), file, args);
    let path = golden(file);
    if std::env::var_os("WIGGLER_BLESS").is_some() {
        std::fs::write(&path, &fresh).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    let (a, b) = (parse_table(&fresh).unwrap(), parse_table(&expected).unwrap());
    let hash = |t: &wiggler_cli::CsvTable| t.comments.iter().find(|c| c.starts_with("config_sha256")).cloned();
    assert_eq!(hash(&a), hash(&b));
    if let Some(d) = first_difference(&a, &b, 1e-10, 1e-14) {
        panic!("{file}: {d}");
    }
}

#[test]
fn forward_energy_golden() {
    check_golden("fig1_kinematics.csv", &["kinematics"]);
}

#[test]
fn angular_spectrum_golden() {
    check_golden("fig2_angular.csv", &["angular"]);
}

#[test]
fn output_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["angular", "kinematics", "tube"] {
        let one = run_to(dir.path(), "a.csv", &[cmd, "--threads", "1"]);
        let again = run_to(dir.path(), "b.csv", &[cmd, "--threads", "1"]);
        let many = run_to(dir.path(), "c.csv", &[cmd, "--threads", "7"]);
        assert_eq!(one, again, "{cmd}");
        assert_eq!(one, many, "{cmd}");
    }
}

#[test]
fn header_carries_hash_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(dir.path(), "k.csv", &["kinematics", "--set", "sweep.energy_points=3"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# wiggler {}", wiggler_cli::VERSION));
    assert!(text.lines().any(|l| l.starts_with("# config_sha256 = ") && l.len() == 18 + 64));
    assert!(text.contains("# sweep.energy_points = 3"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("soft.cfg");
    std::fs::write(&cfg, "[beam]\nenergy_MeV = 7.68\n[sweep]\nenergy_min_MeV = 7.68\nenergy_max_MeV = 7.68\nenergy_points = 1\n").unwrap();
    let text = run_to(dir.path(), "k.csv", &["kinematics", "--config", cfg.to_str().unwrap()]);
    let t = parse_table(&text).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!((t.rows[0][1] / 1.424e-3 - 1.0).abs() < 5e-3);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["limits"]), 0);
    assert_eq!(code(&["limits", "--set", "beam.energy_mev=7"]), 2);
    assert_eq!(code(&["limits", "--set", "laser.wavelength_nm=abc"]), 2);
    assert_eq!(code(&["limits", "--config", "/nonexistent/wiggler.cfg"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    // a zero-intensity laser leaves the tube without gain
    assert_eq!(code(&["tube", "--set", "laser.intensity_W_m2=0"]), 3);
}

#[test]
fn error_message_names_the_key() {
    let out = bin().args(["limits", "--set", "tube.reflection_efficiency=2"]).output().unwrap();
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("tube.reflection_efficiency"), "{err}");
}

#[test]
fn report_only_commands_print_json() {
    let out = bin().args(["coherence", "--set", "coherence.measured_shift=2.77e-4"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let heads = v["headlines"].as_array().unwrap();
    assert!(heads.iter().all(|h| !h["formula"].as_str().unwrap().is_empty()));
    assert!(heads.iter().any(|h| h["name"] == "coherent_fraction"));
}
