//! Black-box checks of the binary: exit codes, override semantics, output
//! formats and the plot script.

use std::path::PathBuf;
use std::process::Command;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_optograv")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("optograv-cli-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_reports_fingerprint_and_overrides_change_it() {
    let out = Command::new(exe())
        .args(["validate", "--preset", "fig3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let base = String::from_utf8(out.stdout).unwrap();
    assert!(base.contains("fingerprint"));

    let out2 = Command::new(exe())
        .args([
            "validate",
            "--preset",
            "fig3",
            "--set",
            "temperature_k=0.008",
        ])
        .output()
        .unwrap();
    assert!(out2.status.success());
    let changed = String::from_utf8(out2.stdout).unwrap();
    let fp = |s: &str| {
        s.lines()
            .next()
            .unwrap()
            .split_whitespace()
            .last()
            .unwrap()
            .to_string()
    };
    assert_ne!(fp(&base), fp(&changed));
}

#[test]
fn config_errors_exit_2() {
    // unknown preset
    let out = Command::new(exe())
        .args(["validate", "--preset", "fig9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // invariant violation
    let out = Command::new(exe())
        .args(["validate", "--preset", "fig3", "--set", "geometry.dx_m=0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("d_x"), "stderr: {err}");

    // unknown key
    let out = Command::new(exe())
        .args(["validate", "--preset", "fig3", "--set", "mech_x.quality=1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed file reports a line number
    let bad = tmp("bad.toml");
    std::fs::write(&bad, "m1_kg = = 1\n").unwrap();
    let out = Command::new(exe())
        .args(["validate", "--preset", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 1"));
}

#[test]
fn instability_exits_3() {
    // an untrapped probe: spring coefficient made overwhelming by a heavy
    // source right next to the probe
    let out = Command::new(exe())
        .args([
            "dns",
            "--preset",
            "fig4",
            "--scenario",
            "quantum",
            "--grid",
            "8.5e6,1.15e7,32,lin",
            "--set",
            "m1_kg=5e3",
            "--set",
            "mech_x.freq_hz=1e2",
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn dns_json_and_plotscript() {
    let csv = tmp("dns.csv");
    let out = Command::new(exe())
        .args([
            "dns",
            "--preset",
            "fig4",
            "--scenario",
            "both",
            "--grid",
            "8.5e6,1.15e7,64,log",
            "--plotscript",
            "--out",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# optograv dns"));
    assert!(text.contains("omega_rad_s,freq_hz,dns_quantum_alpha_m2_s,dns_classical_m2_s"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 65);

    let script = std::fs::read_to_string(format!("{}.gp", csv.display())).unwrap();
    assert!(script.contains("green") && script.contains("red"));

    let json_path = tmp("dns.json");
    let out = Command::new(exe())
        .args([
            "dns",
            "--preset",
            "fig4",
            "--scenario",
            "classical",
            "--grid",
            "8.5e6,1.15e7,16,lin",
            "--format",
            "json",
            "--out",
            json_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&json_path).unwrap();
    assert!(text.contains("\"meta\""));
    assert!(text.contains("\"dns_classical_m2_s\""));
    assert!(text.contains("\"fingerprint\""));
}

#[test]
fn coeffs_exact_and_farfield_modes() {
    let far = Command::new(exe())
        .args(["coeffs", "--preset", "fig3"])
        .output()
        .unwrap();
    let exact = Command::new(exe())
        .args(["coeffs", "--preset", "fig3", "--exact"])
        .output()
        .unwrap();
    assert!(far.status.success() && exact.status.success());
    let far = String::from_utf8(far.stdout).unwrap();
    let exact = String::from_utf8(exact.stdout).unwrap();
    assert!(far.contains("\"mode\": \"farfield\""));
    assert!(exact.contains("\"mode\": \"exact\""));
    assert!(far.contains("\"classical\""));
}

#[test]
fn dynamics_json_reports_spectrum() {
    let out = Command::new(exe())
        .args(["dynamics", "--preset", "fig4", "--scenario", "quantum"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"stable\": true"));
    assert!(text.contains("\"drift_per_s\""));
    assert!(text.contains("\"eigenvalues_re\""));
}

#[test]
fn sweep_csv_columns_and_bits_flag() {
    let path = tmp("sweep.csv");
    let out = Command::new(exe())
        .args([
            "sweep",
            "--preset",
            "fig4",
            "--control-range",
            "0,5e4,8",
            "--bits",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("c1x_n_per_m,sigma_tot,discord_xy,discord_yx,stable"));
    assert!(text.contains("# discord unit: bits"));
}

#[test]
fn covariance_warns_on_ill_conditioned_preset() {
    // the fig3 drive-to-linewidth ratio makes the steady covariance span
    // ~28 decades; the solver must hand back a flagged result, not a clean one
    let out = Command::new(exe())
        .args(["covariance", "--preset", "fig3", "--scenario", "quantum"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("ill-conditioned"), "stderr: {err}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"warning\": \"ill-conditioned"));
}
