//! Run provenance embedded in every output file.
//!
//! The embedded manifest holds only run-reproducing data (fingerprint, tool
//! version, subcommand, resolved assumption echoes), never wall-clock
//! timings, so identical resolved configurations produce byte-identical
//! files. Timing goes to stderr.

use crate::resolve::ResolvedConfig;
use optograv_core::model::Axis;

pub struct RunManifest {
    pub fingerprint: String,
    pub tool_version: &'static str,
    pub subcommand: &'static str,
    pub source: String,
    pub overrides: Vec<String>,
    /// Explicit echo of the values this tool fills in where the reference
    /// configurations leave them open: per-axis detuning, cavity length and
    /// pump power.
    pub assumption_echo: Vec<(String, f64)>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, resolved: &ResolvedConfig) -> Self {
        let p = &resolved.params;
        let d = p.derive();
        let mut assumption_echo = Vec::new();
        for axis in Axis::BOTH {
            let i = axis.index();
            let cav = p.cav(axis);
            assumption_echo.push((format!("detuning_{}_rad_s", axis.label()), d.detuning[i]));
            assumption_echo.push((format!("length_{}_m", axis.label()), cav.length));
            assumption_echo.push((format!("power_{}_w", axis.label()), cav.power(&p.constants)));
        }
        RunManifest {
            fingerprint: p.fingerprint_hex(),
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand,
            source: resolved.source.clone(),
            overrides: resolved.overrides.clone(),
            assumption_echo,
        }
    }

    /// `#`-prefixed header lines for CSV files.
    pub fn csv_header(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "# optograv {} v{}\n",
            self.subcommand, self.tool_version
        ));
        s.push_str(&format!("# config: {}\n", self.source));
        for ov in &self.overrides {
            s.push_str(&format!("# override: {ov}\n"));
        }
        s.push_str(&format!("# fingerprint: {}\n", self.fingerprint));
        for (k, v) in &self.assumption_echo {
            s.push_str(&format!("# assumed {k}: {}\n", crate::emit::fmt_f64(*v)));
        }
        s
    }
}
