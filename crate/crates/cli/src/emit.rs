//! Deterministic serialization. Numbers are written with 17 significant
//! digits so files round-trip f64 exactly and identical runs are
//! byte-identical. JSON is emitted by a small writer with a fixed key order
//! (a generic serializer would not give control over float formatting).

use crate::manifest::RunManifest;
use optograv_core::correlations::{CovarianceReport, SweepResult};
use optograv_core::dynamics::{LinearDynamics, StabilityReport};
use optograv_core::gravity::GravityCoefficients;
use optograv_core::model::Scenario;
use optograv_core::spectra::{GridSpec, Spacing, Spectrum};
use std::io::Write;

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.16e}")
}

pub fn write_text(path: Option<&str>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}

// --- tiny JSON builder -----------------------------------------------------

pub struct Json {
    buf: String,
    indent: usize,
}

impl Json {
    pub fn new() -> Self {
        Json {
            buf: String::new(),
            indent: 0,
        }
    }

    fn pad(&mut self) {
        for _ in 0..self.indent {
            self.buf.push(' ');
        }
    }

    pub fn raw(&mut self, s: &str) -> &mut Self {
        self.buf.push_str(s);
        self
    }

    pub fn string(&mut self, s: &str) -> &mut Self {
        self.buf.push('"');
        for c in s.chars() {
            match c {
                '"' => self.buf.push_str("\\\""),
                '\\' => self.buf.push_str("\\\\"),
                '\n' => self.buf.push_str("\\n"),
                c if (c as u32) < 0x20 => self.buf.push_str(&format!("\\u{:04x}", c as u32)),
                c => self.buf.push(c),
            }
        }
        self.buf.push('"');
        self
    }

    pub fn number(&mut self, x: f64) -> &mut Self {
        if x.is_finite() {
            self.buf.push_str(&fmt_f64(x));
        } else {
            // JSON has no NaN/inf literals
            self.buf.push_str("null");
        }
        self
    }

    pub fn open(&mut self, brace: char) -> &mut Self {
        self.buf.push(brace);
        self.buf.push('\n');
        self.indent += 2;
        self.pad();
        self
    }

    pub fn close(&mut self, brace: char) -> &mut Self {
        self.buf.push('\n');
        self.indent -= 2;
        self.pad();
        self.buf.push(brace);
        self
    }

    pub fn sep(&mut self) -> &mut Self {
        self.buf.push_str(",\n");
        self.pad();
        self
    }

    pub fn key(&mut self, k: &str) -> &mut Self {
        self.string(k);
        self.buf.push_str(": ");
        self
    }

    pub fn numbers(&mut self, xs: &[f64]) -> &mut Self {
        self.buf.push('[');
        for (i, &x) in xs.iter().enumerate() {
            if i > 0 {
                self.buf.push_str(", ");
            }
            self.number(x);
        }
        self.buf.push(']');
        self
    }

    pub fn finish(mut self) -> String {
        self.buf.push('\n');
        self.buf
    }
}

fn meta_object(j: &mut Json, man: &RunManifest) {
    j.open('{');
    j.key("tool")
        .string(&format!("optograv {}", man.tool_version));
    j.sep().key("subcommand").string(man.subcommand);
    j.sep().key("config").string(&man.source);
    j.sep().key("fingerprint").string(&man.fingerprint);
    j.sep().key("overrides").raw("[");
    for (i, ov) in man.overrides.iter().enumerate() {
        if i > 0 {
            j.raw(", ");
        }
        j.string(ov);
    }
    j.raw("]");
    j.sep().key("assumed").open('{');
    for (i, (k, v)) in man.assumption_echo.iter().enumerate() {
        if i > 0 {
            j.sep();
        }
        j.key(k).number(*v);
    }
    j.close('}');
    j.close('}');
}

fn matrix_rows(j: &mut Json, m: &[Vec<f64>]) {
    j.open('[');
    for (i, row) in m.iter().enumerate() {
        if i > 0 {
            j.sep();
        }
        j.numbers(row);
    }
    j.close(']');
}

// --- payloads ----------------------------------------------------------------

pub fn coeffs_json(
    man: &RunManifest,
    exact: bool,
    sets: &[GravityCoefficients; 3],
    displacements: &[(f64, f64); 3],
) -> String {
    let mut j = Json::new();
    j.open('{');
    j.key("meta");
    meta_object(&mut j, man);
    j.sep()
        .key("mode")
        .string(if exact { "exact" } else { "farfield" });
    for (c, (dx, dy)) in sets.iter().zip(displacements) {
        j.sep().key(c.scenario.label()).open('{');
        j.key("c0_x_n").number(c.c0_x);
        j.sep().key("c0_y_n").number(c.c0_y);
        j.sep().key("c1_x_n_per_m").number(c.c1_x);
        j.sep().key("c1_y_n_per_m").number(c.c1_y);
        j.sep().key("c2_n_per_m").number(c.c2);
        j.sep().key("steady_x2_m").number(*dx);
        j.sep().key("steady_y2_m").number(*dy);
        j.close('}');
    }
    j.close('}');
    j.finish()
}

pub fn dynamics_json(
    man: &RunManifest,
    scenario: Scenario,
    dyn_: &LinearDynamics,
    report: &StabilityReport,
) -> String {
    let drift: Vec<Vec<f64>> = (0..8)
        .map(|i| (0..8).map(|k| dyn_.drift[(i, k)]).collect())
        .collect();
    let diffusion: Vec<Vec<f64>> = (0..8)
        .map(|i| (0..8).map(|k| dyn_.diffusion[(i, k)]).collect())
        .collect();
    let mut j = Json::new();
    j.open('{');
    j.key("meta");
    meta_object(&mut j, man);
    j.sep().key("scenario").string(scenario.label());
    j.sep().key("basis").raw("[");
    for (i, b) in dyn_.basis.iter().enumerate() {
        if i > 0 {
            j.raw(", ");
        }
        j.string(b);
    }
    j.raw("]");
    j.sep().key("x_zpf_m").numbers(&dyn_.x_zpf);
    j.sep().key("coupling_rad_s").numbers(&dyn_.coupling);
    j.sep().key("drift_per_s");
    matrix_rows(&mut j, &drift);
    j.sep().key("diffusion_per_s");
    matrix_rows(&mut j, &diffusion);
    j.sep()
        .key("eigenvalues_re")
        .numbers(&report.eigenvalues.iter().map(|e| e.0).collect::<Vec<_>>());
    j.sep()
        .key("eigenvalues_im")
        .numbers(&report.eigenvalues.iter().map(|e| e.1).collect::<Vec<_>>());
    j.sep()
        .key("stable")
        .raw(if report.stable { "true" } else { "false" });
    j.sep()
        .key("max_real_part_per_s")
        .number(report.max_real_part);
    j.close('}');
    j.finish()
}

fn grid_comment(grid: &GridSpec) -> String {
    format!(
        "# grid: omega in [{}, {}] rad/s, {} points, {} spacing\n",
        fmt_f64(grid.omega_min),
        fmt_f64(grid.omega_max),
        grid.n_points,
        match grid.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    )
}

/// CSV with one frequency column pair and one PSD column per scenario.
/// Values are single-sided (2x the symmetrized two-sided density).
pub fn dns_csv(man: &RunManifest, grid: &GridSpec, spectra: &[Spectrum]) -> String {
    let mut s = man.csv_header();
    s.push_str(&grid_comment(grid));
    s.push_str("# psd convention: single-sided, S_one(omega) = 2 * S_two(omega)\n");
    s.push_str("omega_rad_s,freq_hz");
    for sp in spectra {
        s.push_str(&format!(",dns_{}_m2_s", sp.scenario.label()));
    }
    s.push('\n');
    let n = spectra[0].frequencies.len();
    for k in 0..n {
        let w = spectra[0].frequencies[k];
        s.push_str(&fmt_f64(w));
        s.push(',');
        s.push_str(&fmt_f64(w / std::f64::consts::TAU));
        for sp in spectra {
            s.push(',');
            s.push_str(&fmt_f64(2.0 * sp.values[k]));
        }
        s.push('\n');
    }
    s
}

pub fn dns_json(man: &RunManifest, grid: &GridSpec, spectra: &[Spectrum]) -> String {
    let mut j = Json::new();
    j.open('{');
    j.key("meta");
    meta_object(&mut j, man);
    j.sep().key("psd_convention").string("single-sided");
    j.sep()
        .key("grid_n_points")
        .raw(&format!("{}", grid.n_points));
    j.sep().key("omega_rad_s").numbers(&spectra[0].frequencies);
    for sp in spectra {
        let single: Vec<f64> = sp.values.iter().map(|v| 2.0 * v).collect();
        j.sep()
            .key(&format!("dns_{}_m2_s", sp.scenario.label()))
            .numbers(&single);
    }
    j.close('}');
    j.finish()
}

/// gnuplot overlay script for a DNS CSV (classical green, branch red).
pub fn dns_plotscript(csv_path: &str, spectra: &[Spectrum]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set logscale y\n");
    s.push_str("set xlabel 'frequency (Hz)'\n");
    s.push_str("set ylabel 'displacement PSD (m^2/Hz-equivalent, single-sided)'\n");
    s.push_str("plot ");
    for (i, sp) in spectra.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let color = if sp.scenario == Scenario::Classical {
            "green"
        } else {
            "red"
        };
        s.push_str(&format!(
            "'{csv_path}' using 2:{} with lines lc rgb '{color}' title '{}'",
            3 + i,
            sp.scenario.label()
        ));
    }
    s.push('\n');
    s
}

pub fn sweep_csv(man: &RunManifest, scenario: Scenario, sw: &SweepResult, bits: bool) -> String {
    let conv = if bits {
        std::f64::consts::LN_2.recip()
    } else {
        1.0
    };
    let unit = if bits { "bits" } else { "nats" };
    let mut s = man.csv_header();
    s.push_str(&format!(
        "# scenario: {}\n# discord unit: {unit}\n",
        scenario.label()
    ));
    s.push_str("c1x_n_per_m,sigma_tot,discord_xy,discord_yx,stable\n");
    for k in 0..sw.control.len() {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(sw.control[k]),
            fmt_f64(sw.sigma_tot[k]),
            fmt_f64(sw.discord_xy[k] * conv),
            fmt_f64(sw.discord_yx[k] * conv),
            sw.stable[k]
        ));
    }
    s
}

pub fn sweep_json(man: &RunManifest, scenario: Scenario, sw: &SweepResult, bits: bool) -> String {
    let conv = if bits {
        std::f64::consts::LN_2.recip()
    } else {
        1.0
    };
    let mut j = Json::new();
    j.open('{');
    j.key("meta");
    meta_object(&mut j, man);
    j.sep().key("scenario").string(scenario.label());
    j.sep()
        .key("discord_unit")
        .string(if bits { "bits" } else { "nats" });
    j.sep().key("c1x_n_per_m").numbers(&sw.control);
    j.sep().key("sigma_tot").numbers(&sw.sigma_tot);
    j.sep()
        .key("discord_xy")
        .numbers(&sw.discord_xy.iter().map(|d| d * conv).collect::<Vec<_>>());
    j.sep()
        .key("discord_yx")
        .numbers(&sw.discord_yx.iter().map(|d| d * conv).collect::<Vec<_>>());
    j.sep().key("stable").raw("[");
    for (i, st) in sw.stable.iter().enumerate() {
        if i > 0 {
            j.raw(", ");
        }
        j.raw(if *st { "true" } else { "false" });
    }
    j.raw("]");
    j.close('}');
    j.finish()
}

pub fn covariance_json(man: &RunManifest, report: &CovarianceReport) -> String {
    let full: Vec<Vec<f64>> = (0..8)
        .map(|i| (0..8).map(|k| report.sigma_full[(i, k)]).collect())
        .collect();
    let optical: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|k| report.sigma_optical[(i, k)]).collect())
        .collect();
    let mut j = Json::new();
    j.open('{');
    j.key("meta");
    meta_object(&mut j, man);
    j.sep().key("scenario").string(report.scenario.label());
    j.sep()
        .key("stable")
        .raw(if report.stable { "true" } else { "false" });
    j.sep().key("sigma_full");
    matrix_rows(&mut j, &full);
    j.sep().key("sigma_optical");
    matrix_rows(&mut j, &optical);
    j.sep().key("sigma_tot").number(report.sigma_tot);
    j.sep()
        .key("sigma_offdiag_total")
        .number(report.sigma_offdiag_total);
    j.sep().key("discord_xy_nats").number(report.discord_xy);
    j.sep().key("discord_yx_nats").number(report.discord_yx);
    j.sep().key("nu_min").number(report.nu_min);
    j.sep()
        .key("lyapunov_residual_rel")
        .number(report.residual_rel);
    j.sep().key("warning");
    match &report.warning {
        Some(w) => {
            j.string(w);
        }
        None => {
            j.raw("null");
        }
    }
    j.close('}');
    j.finish()
}
