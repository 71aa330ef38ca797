//! Configuration resolution: preset or file, then `--set` overrides, then
//! validation. Precedence is override > file > preset default.

use crate::CliError;
use optograv_core::config;
use optograv_core::model::{Axis, ValidatedParams};

pub struct ResolvedConfig {
    pub params: ValidatedParams,
    /// Name or path the base configuration came from.
    pub source: String,
    pub overrides: Vec<String>,
}

pub fn resolve_config(preset: &str, sets: &[String]) -> Result<ResolvedConfig, CliError> {
    let base: String = match config::preset_text(preset) {
        Ok(text) => text.to_string(),
        Err(config::ConfigError::UnknownPreset(_)) if looks_like_path(preset) => {
            std::fs::read_to_string(preset)
                .map_err(|e| CliError::Config(format!("cannot read `{preset}`: {e}")))?
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let raw = config::resolve(&base, sets).map_err(|e| CliError::Config(e.to_string()))?;
    let params = raw
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ResolvedConfig {
        params,
        source: preset.to_string(),
        overrides: sets.to_vec(),
    })
}

fn looks_like_path(name: &str) -> bool {
    name.contains('/') || name.contains('.') || std::path::Path::new(name).exists()
}

/// Human-readable validation summary.
pub fn describe(resolved: &ResolvedConfig) -> String {
    let p = &resolved.params;
    let d = p.derive();
    let mut out = String::new();
    out.push_str(&format!(
        "configuration `{}` is valid (fingerprint {})\n",
        resolved.source,
        p.fingerprint_hex()
    ));
    out.push_str(&format!(
        "  masses: m1 = {:.6e} kg, m2 = {:.6e} kg; T = {:.6e} K\n",
        p.m1, p.m2, p.temperature
    ));
    out.push_str(&format!(
        "  geometry: d_x = {:.6e} m, d_y = {:.6e} m, d = {:.6e} m, x2_bar = {:.6e} m\n",
        p.geometry.d_x, p.geometry.d_y, d.d, p.geometry.x2_bar
    ));
    for axis in Axis::BOTH {
        let i = axis.index();
        let mech = p.mech(axis);
        let cav = p.cav(axis);
        out.push_str(&format!(
            "  {} axis: omega = {:.6e} rad/s, gamma = {:.6e} rad/s; cavity kappa = {:.6e} 1/s, \
             detuning = {:.6e} rad/s, length = {:.6e} m, chi = {:.6e}, drive E = {:.6e} 1/s\n",
            axis.label(),
            mech.omega,
            mech.gamma,
            cav.kappa,
            d.detuning[i],
            cav.length,
            d.chi[i],
            d.drive_amplitude[i]
        ));
    }
    out
}
