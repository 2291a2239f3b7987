//! End-to-end tests of the `qdot` binary: exit codes, config diagnostics,
//! CSV shape and cross-thread determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qdot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const EQUILIBRIUM: &str = r#"{
    "device": {
        "delta_eps": 3.0,
        "gamma": 1.0,
        "charging": {"mode": "symmetric", "kappa": 20.0, "coupling": 40.0}
    },
    "operating": {"t_mean": 7.5, "delta_t": 0.0, "delta_v": 0.0}
}"#;

#[test]
fn point_at_equilibrium_prints_zero_currents() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "eq.json", EQUILIBRIUM);
    let out = qdot(&["point", "--config", &config]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let j_rho: f64 = stdout
        .lines()
        .find(|l| l.trim_start().starts_with("J_rho"))
        .and_then(|l| l.split('=').nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(j_rho.abs() < 1e-12, "J_rho = {j_rho}");
}

#[test]
fn point_rejects_negative_temperature_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let body = EQUILIBRIUM.replace("\"t_mean\": 7.5", "\"t_mean\": -2.0");
    let config = write_config(dir.path(), "bad.json", &body);
    let out = qdot(&["point", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("t_mean"), "stderr: {stderr}");
}

#[test]
fn point_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let body = EQUILIBRIUM.replace("\"delta_eps\"", "\"delta_epz\"");
    let config = write_config(dir.path(), "typo.json", &body);
    let out = qdot(&["point", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("delta_epz"));
}

#[test]
fn point_rejects_a_grid_block() {
    let dir = tempfile::tempdir().unwrap();
    let body = EQUILIBRIUM.replace(
        "\"operating\": {\"t_mean\": 7.5, \"delta_t\": 0.0, \"delta_v\": 0.0}",
        r#""operating": {"t_mean": 7.5, "delta_t": 0.0, "delta_v": 0.0},
           "grid": {"axes": [{"param": "u", "min": 0.0, "max": 1.0, "steps": 2}]}"#,
    );
    let config = write_config(dir.path(), "gridded.json", &body);
    let out = qdot(&["point", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
}

const SWEEP_TWO_POINTS: &str = r#"{
    "device": {
        "delta_eps": 3.0,
        "gamma": 1.0,
        "charging": {"mode": "symmetric", "kappa": 20.0, "coupling": 40.0}
    },
    "operating": {"t_mean": 7.5, "delta_t": 0.2, "delta_v": 3.0},
    "grid": {"axes": [{"param": "u", "min": 0.0, "max": 80.0, "steps": 2}]}
}"#;

#[test]
fn sweep_writes_header_plus_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sweep.json", SWEEP_TWO_POINTS);
    let out_path = dir.path().join("rows.csv");
    let out = qdot(&["sweep", "--config", &config, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(
        lines[0],
        "u,J_rho,J_u,N_L,N_R,Q_L_out,Q_R_in,J_S,J_S_r,J_S_f,p00,p10,p01,p11,residual_firstlaw,inverse_particle,inverse_energy"
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("min J_S"), "summary missing: {stdout}");
}

#[test]
fn sweep_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let body = SWEEP_TWO_POINTS.replace(
        r#"{"param": "u", "min": 0.0, "max": 80.0, "steps": 2}"#,
        r#"{"param": "delta_t", "min": -4.0, "max": 4.0, "steps": 41},
           {"param": "delta_v", "min": -4.0, "max": 4.0, "steps": 17}"#,
    );
    let config = write_config(dir.path(), "grid.json", &body);
    let single = dir.path().join("single.csv");
    let multi = dir.path().join("multi.csv");
    let out1 = qdot(&[
        "sweep", "--config", &config,
        "--out", single.to_str().unwrap(),
        "--threads", "1",
    ]);
    let out8 = qdot(&[
        "sweep", "--config", &config,
        "--out", multi.to_str().unwrap(),
        "--threads", "8",
    ]);
    assert_eq!(out1.status.code(), Some(0));
    assert_eq!(out8.status.code(), Some(0));
    assert_eq!(fs::read(&single).unwrap(), fs::read(&multi).unwrap());
}

#[test]
fn sweep_without_output_path_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sweep.json", SWEEP_TWO_POINTS);
    let out = qdot(&["sweep", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_to_unwritable_path_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sweep.json", SWEEP_TWO_POINTS);
    let out = qdot(&["sweep", "--config", &config, "--out", "/proc/qdot/nope.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_figure_lists_valid_names() {
    let out = qdot(&["figure", "fig9"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("fig2a") && stderr.contains("fig6"), "{stderr}");
}

#[test]
fn figure_fig5_emits_csv_with_entropy_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdot(&[
        "figure", "fig5",
        "--out", dir.path().to_str().unwrap(),
        "--set", "u_steps=41",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("fig5.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("u,"));
    assert!(header.contains("J_S_r") && header.contains("J_S_f"));
    assert_eq!(text.lines().count(), 42);
}

#[test]
fn figure_fig3_emits_contour_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdot(&[
        "figure", "fig3",
        "--out", dir.path().to_str().unwrap(),
        "--set", "dt_steps=41",
        "--set", "dv_steps=41",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig3_contour.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["quantity"], "J_rho");
    assert!(!sidecar["contours"].as_array().unwrap().is_empty());
    assert_eq!(sidecar["quadrant_boundaries"].as_array().unwrap().len(), 2);
    // The run summary must report a populated inverse-particle region.
    let stdout = String::from_utf8(out.stdout).unwrap();
    let count: usize = stdout
        .lines()
        .find(|l| l.starts_with("regions:"))
        .and_then(|l| l.split("inverse_particle = ").nth(1))
        .and_then(|l| l.split(' ').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(count > 0, "summary: {stdout}");
}

#[test]
fn point_in_the_compensated_entropy_regime() {
    // At coupling 60 with dT = 0.2, dV = 3 the energy current runs inverse:
    // the report must show J_S_r < 0 < J_S.
    let dir = tempfile::tempdir().unwrap();
    let body = EQUILIBRIUM
        .replace("\"coupling\": 40.0", "\"coupling\": 60.0")
        .replace(
            "\"delta_t\": 0.0, \"delta_v\": 0.0",
            "\"delta_t\": 0.2, \"delta_v\": 3.0",
        );
    let config = write_config(dir.path(), "fig5_u60.json", &body);
    let out = qdot(&["point", "--config", &config]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let field = |name: &str| -> f64 {
        stdout
            .lines()
            .find(|l| l.trim_start().starts_with(name))
            .and_then(|l| l.split('=').nth(1))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    assert!(field("J_S_r") < 0.0);
    assert!(field("J_S ") > 0.0);
}

#[test]
fn fig2c_with_extended_range_shows_the_sign_change() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdot(&[
        "figure", "fig2c",
        "--out", dir.path().to_str().unwrap(),
        "--set", "u_min=0",
        "--set", "u_max=100",
        "--set", "u_steps=51",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("fig2c.csv")).unwrap();
    let mut header = text.lines().next().unwrap().split(',');
    let j_u_col = header.position(|h| h == "J_u").unwrap();
    let j_u: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(j_u_col).unwrap().parse().unwrap())
        .collect();
    let max = j_u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = j_u.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(max > 0.0 && min < 0.0, "J_u range [{min}, {max}] has no sign change");
}

#[test]
fn validate_is_deterministic_per_seed() {
    let a = qdot(&["validate", "--seed", "11", "--trials", "40"]);
    let b = qdot(&["validate", "--seed", "11", "--trials", "40"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let c = qdot(&["validate", "--seed", "12", "--trials", "40"]);
    assert_eq!(c.status.code(), Some(0));
}
