//! TOML configuration and the shipped presets.
//!
//! Sections mirror the parameter record: `[geometry]`, `[mech_x]`, `[mech_y]`,
//! `[cav_x]`, `[cav_y]`, with masses and temperature at the top level.
//! Lengths are in m, masses in kg, temperature in K. Keys ending in `_hz`
//! are ordinary frequencies and are multiplied by 2*pi on load; keys ending
//! in `_rad_s` are angular rates taken as-is (cavity decay rates and drive
//! amplitudes are conventionally quoted that way). Unknown keys are rejected.

use crate::constants::PhysicalConstants;
use crate::model::{CavityAxis, Drive, Geometry, MechanicalAxis, SystemParameters};
use serde::Deserialize;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown preset `{0}` (expected `fig3` or `fig4`)")]
    UnknownPreset(String),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config error at `{path}`: {message}")]
    Field { path: String, message: String },
    #[error("override `{0}` is not of the form section.key=value or key=value")]
    BadOverride(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSchema {
    m1_kg: f64,
    m2_kg: f64,
    temperature_k: f64,
    geometry: GeometrySchema,
    mech_x: MechSchema,
    mech_y: MechSchema,
    cav_x: CavSchema,
    cav_y: CavSchema,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometrySchema {
    dx_m: f64,
    dy_m: f64,
    #[serde(default)]
    x2_bar_m: f64,
    #[serde(default = "default_farfield_factor")]
    farfield_factor: f64,
}

fn default_farfield_factor() -> f64 {
    1e3
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MechSchema {
    freq_hz: f64,
    damping_hz: f64,
    #[serde(default)]
    trap_center_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CavSchema {
    cavity_freq_hz: f64,
    detuning_hz: f64,
    kappa_rad_s: f64,
    length_m: f64,
    drive_rad_s: Option<f64>,
    power_w: Option<f64>,
}

impl MechSchema {
    fn build(&self) -> MechanicalAxis {
        MechanicalAxis {
            omega: TAU * self.freq_hz,
            gamma: TAU * self.damping_hz,
            r_osc: self.trap_center_m,
        }
    }
}

impl CavSchema {
    fn build(&self, path: &str) -> Result<CavityAxis, ConfigError> {
        let omega_c = TAU * self.cavity_freq_hz;
        let drive = match (self.drive_rad_s, self.power_w) {
            (Some(e), None) => Drive::Amplitude(e),
            (None, Some(p)) => Drive::Power(p),
            (Some(_), Some(_)) => {
                return Err(ConfigError::Field {
                    path: path.to_string(),
                    message: "give either drive_rad_s or power_w, not both".into(),
                })
            }
            (None, None) => {
                return Err(ConfigError::Field {
                    path: path.to_string(),
                    message: "missing drive: set drive_rad_s or power_w".into(),
                })
            }
        };
        Ok(CavityAxis {
            omega_c,
            delta_0: TAU * self.detuning_hz,
            kappa: self.kappa_rad_s,
            length: self.length_m,
            drive,
        })
    }
}

/// Parse a TOML document into raw (unvalidated) parameters.
pub fn load_config_str(text: &str) -> Result<SystemParameters, ConfigError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    from_table(table)
}

fn from_table(table: toml::Table) -> Result<SystemParameters, ConfigError> {
    let text = toml::to_string(&table).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let de = toml::de::Deserializer::parse(&text)
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    let schema: FileSchema =
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Field {
            path: e.path().to_string(),
            message: e.inner().message().to_string(),
        })?;
    Ok(SystemParameters {
        constants: PhysicalConstants::codata(),
        m1: schema.m1_kg,
        m2: schema.m2_kg,
        geometry: Geometry {
            d_x: schema.geometry.dx_m,
            d_y: schema.geometry.dy_m,
            x2_bar: schema.geometry.x2_bar_m,
            farfield_factor: schema.geometry.farfield_factor,
        },
        mech_x: schema.mech_x.build(),
        mech_y: schema.mech_y.build(),
        cav_x: schema.cav_x.build("cav_x")?,
        cav_y: schema.cav_y.build("cav_y")?,
        temperature: schema.temperature_k,
    })
}

pub const FIG3_TOML: &str = include_str!("../presets/fig3.toml");
pub const FIG4_TOML: &str = include_str!("../presets/fig4.toml");

/// Load a shipped preset by name.
pub fn preset(name: &str) -> Result<SystemParameters, ConfigError> {
    match name {
        "fig3" => load_config_str(FIG3_TOML),
        "fig4" => load_config_str(FIG4_TOML),
        other => Err(ConfigError::UnknownPreset(other.to_string())),
    }
}

/// Raw preset text by name, for callers that apply overrides.
pub fn preset_text(name: &str) -> Result<&'static str, ConfigError> {
    match name {
        "fig3" => Ok(FIG3_TOML),
        "fig4" => Ok(FIG4_TOML),
        other => Err(ConfigError::UnknownPreset(other.to_string())),
    }
}

/// Resolve a configuration: base TOML text plus `section.key=value` overrides
/// (highest precedence). Override values are parsed as TOML literals, so
/// plain numbers work unquoted.
pub fn resolve(base_toml: &str, overrides: &[String]) -> Result<SystemParameters, ConfigError> {
    let mut table: toml::Table = base_toml
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    for ov in overrides {
        let (path, value) = ov
            .split_once('=')
            .ok_or_else(|| ConfigError::BadOverride(ov.clone()))?;
        let value: toml::Value =
            value
                .trim()
                .parse()
                .map_err(|e: toml::de::Error| ConfigError::Field {
                    path: path.trim().to_string(),
                    message: format!("bad override value: {e}"),
                })?;
        insert_path(&mut table, path.trim(), value)?;
    }
    from_table(table)
}

fn insert_path(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<(), ConfigError> {
    let mut parts = path.split('.').collect::<Vec<_>>();
    if parts.iter().any(|p| p.is_empty()) || parts.is_empty() {
        return Err(ConfigError::BadOverride(path.to_string()));
    }
    let last = parts.pop().unwrap();
    let mut node = table;
    for part in parts {
        node = node
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| ConfigError::Field {
                path: path.to_string(),
                message: "override path traverses a non-table value".into(),
            })?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}
