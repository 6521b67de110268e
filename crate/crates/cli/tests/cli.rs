use std::path::{Path, PathBuf};
use std::process::Command;

use bellcorr::bell::{build_mermin_expression, build_svetlichny_expression, BellExpression, Terms};
use bellcorr_cli::verify::check_ghz_operator;
use bellcorr_cli::{RunManifest, EXIT_CAPACITY, EXIT_CONFIG, EXIT_OK};

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bellcorr(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bellcorr"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn config_path(name: &str) -> String {
    workspace().join("configs").join(name).to_string_lossy().into_owned()
}

#[test]
fn bounds_writes_a_checked_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = bellcorr(&[
        "--config",
        &config_path("honeycomb73.json"),
        "--out",
        out,
        "--quiet",
        "bounds",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let manifest = RunManifest::load_and_check(dir.path()).unwrap();
    assert_eq!(manifest.command, "bounds");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("bounds.json")).unwrap()).unwrap();
    assert!((report["classical_bound"].as_f64().unwrap() + 131.3).abs() < 1e-9);
}

#[test]
fn tampered_artifacts_fail_the_manifest_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        bellcorr(&["--config", &config_path("chsh.json"), "--out", out, "--quiet", "bounds"]).0,
        EXIT_OK
    );
    std::fs::write(dir.path().join("bounds.json"), b"{}").unwrap();
    assert!(RunManifest::load_and_check(dir.path()).is_err());
}

#[test]
fn unknown_config_keys_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"schema_version": 1, "seed": 1, "model": {"kind": "chsh"}, "colour": "red"}"#,
    )
    .unwrap();
    let (code, _, err) = bellcorr(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "bounds",
    ]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn missing_config_and_bad_models_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(bellcorr(&["--out", out, "train"]).0, EXIT_CONFIG);
    assert_eq!(
        bellcorr(&["--config", "/nonexistent/cfg.json", "--out", out, "train"]).0,
        EXIT_CONFIG
    );
    let cfg = dir.path().join("even_chain.json");
    std::fs::write(
        &cfg,
        r#"{"schema_version": 1, "seed": 1, "model": {"kind": "chain", "n": 4, "delta": 2.0, "eps": 0.95}}"#,
    )
    .unwrap();
    assert_eq!(
        bellcorr(&["--config", cfg.to_str().unwrap(), "--out", out, "train"]).0,
        EXIT_CONFIG
    );
}

#[test]
fn oversized_registers_are_capacity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = bellcorr(&["--config", &config_path("honeycomb73.json"), "--out", out, "train"]);
    assert_eq!(code, EXIT_CAPACITY, "{err}");
}

#[test]
fn seed_and_mode_flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = bellcorr(&[
        "--config",
        &config_path("ghz12_readout.json"),
        "--out",
        out,
        "--seed",
        "77",
        "--mode",
        "exact",
        "--quiet",
        "depth",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let manifest = RunManifest::load_and_check(dir.path()).unwrap();
    assert_eq!(manifest.seed, Some(77));
    let depth: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("depth.json")).unwrap()).unwrap();
    assert_eq!(depth["mode"], "exact");
    assert_eq!(depth["certificate"]["certified_depth"], 12);
}

#[test]
fn verify_passes_on_the_built_library() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, err) = bellcorr(&["--out", dir.path().to_str().unwrap(), "verify"]);
    assert_eq!(code, EXIT_OK, "{stdout}{err}");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["failed"], 0);
}

/// Flipping one sign of the Svetlichny expression must be caught by the
/// operator check the `verify` command runs.
#[test]
fn operator_check_catches_a_flipped_sign() {
    for build in [build_svetlichny_expression, build_mermin_expression] {
        let (expr, meas) = build(4).unwrap();
        assert!(check_ghz_operator("intact", &expr, &meas).passed);
        let mutated = flip_first_sign(&expr);
        assert!(!check_ghz_operator("mutated", &mutated, &meas).passed);
    }
}

fn flip_first_sign(expr: &BellExpression) -> BellExpression {
    let mut out = expr.clone();
    match &mut out.terms {
        Terms::Sparse(terms) => terms[0].weight = -terms[0].weight,
        Terms::Full(weights) => weights[0] = -weights[0],
    }
    out
}
