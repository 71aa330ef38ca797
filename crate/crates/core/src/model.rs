//! Parameter records for the two-body setup: source mass, trapped probe,
//! per-axis mechanics and cavities, plus validation and derived quantities.

use crate::constants::PhysicalConstants;
use std::fmt;
use thiserror::Error;

/// Mechanical axis selector. The probe moves in the x–y plane only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Force model for the source mass.
///
/// The two quantum branches place the source at +d_x or -d_x; the classical
/// model averages the two branch force expansions, which cancels the x–y
/// cross coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    QuantumAlpha,
    QuantumBeta,
    Classical,
}

impl Scenario {
    /// Branch sign s: +1 for alpha, -1 for beta, none for classical.
    pub fn branch_sign(self) -> Option<f64> {
        match self {
            Scenario::QuantumAlpha => Some(1.0),
            Scenario::QuantumBeta => Some(-1.0),
            Scenario::Classical => None,
        }
    }

    pub fn is_quantum(self) -> bool {
        !matches!(self, Scenario::Classical)
    }

    pub fn label(self) -> &'static str {
        match self {
            Scenario::QuantumAlpha => "quantum_alpha",
            Scenario::QuantumBeta => "quantum_beta",
            Scenario::Classical => "classical",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Placement of the source relative to the probe trap center.
///
/// The source branches sit at (±d_x, 0); the probe trap is centered at
/// (x2_bar, d_y). `farfield_factor` is the guard ratio d_x/|x2_bar| required
/// before the far-field coefficient formulas are considered valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Half separation of the two source positions along x, m.
    pub d_x: f64,
    /// Source–probe offset along y, m.
    pub d_y: f64,
    /// Probe mean x offset, m.
    pub x2_bar: f64,
    /// Required d_x / |x2_bar| ratio for the far-field path.
    pub farfield_factor: f64,
}

impl Geometry {
    pub fn new(d_x: f64, d_y: f64) -> Self {
        Self {
            d_x,
            d_y,
            x2_bar: 0.0,
            farfield_factor: 1e3,
        }
    }

    /// Euclidean source–probe distance at x2_bar = 0.
    pub fn d(&self) -> f64 {
        self.d_x.hypot(self.d_y)
    }

    /// True when the far-field expansion d_x >> |x2_bar| is justified.
    pub fn farfield_ok(&self) -> bool {
        self.x2_bar == 0.0 || self.d_x >= self.farfield_factor * self.x2_bar.abs()
    }
}

/// Harmonic trap along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalAxis {
    /// Trap angular frequency, rad/s.
    pub omega: f64,
    /// Momentum damping rate, rad/s.
    pub gamma: f64,
    /// Trap center coordinate, m.
    pub r_osc: f64,
}

/// Cavity drive specification: pump power or input amplitude, one given and
/// the other derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Pump power, W.
    Power(f64),
    /// Input amplitude sqrt(2 kappa P / hbar omega_0), 1/s.
    Amplitude(f64),
}

impl Drive {
    fn value(&self) -> f64 {
        match *self {
            Drive::Power(p) => p,
            Drive::Amplitude(e) => e,
        }
    }
}

/// One cavity mode reading out one mechanical axis.
///
/// The detuning is stored directly rather than as a laser frequency: the
/// physics is sensitive to Delta_0 at the Hz level while omega_c sits at
/// optical scales, and the difference omega_c - omega_0 would lose most of
/// those digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityAxis {
    /// Cavity mode angular frequency, rad/s.
    pub omega_c: f64,
    /// Pump detuning Delta_0 = omega_c - omega_0, rad/s; either sign.
    pub delta_0: f64,
    /// Photon amplitude decay rate, rad/s.
    pub kappa: f64,
    /// Cavity length, m.
    pub length: f64,
    /// Pump specification.
    pub drive: Drive,
}

impl CavityAxis {
    /// Pump detuning Delta_0; either sign allowed.
    pub fn detuning(&self) -> f64 {
        self.delta_0
    }

    /// Drive laser angular frequency omega_0 = omega_c - Delta_0, rad/s.
    pub fn omega_0(&self) -> f64 {
        self.omega_c - self.delta_0
    }

    /// Displacement-pull coupling chi = omega_c / L, rad s^-1 m^-1.
    pub fn chi(&self) -> f64 {
        self.omega_c / self.length
    }

    /// Input amplitude sqrt(2 kappa P / hbar omega_0), 1/s.
    pub fn drive_amplitude(&self, constants: &PhysicalConstants) -> f64 {
        match self.drive {
            Drive::Amplitude(e) => e,
            Drive::Power(p) => (2.0 * self.kappa * p / (constants.hbar * self.omega_0())).sqrt(),
        }
    }

    /// Pump power, W.
    pub fn power(&self, constants: &PhysicalConstants) -> f64 {
        match self.drive {
            Drive::Power(p) => p,
            Drive::Amplitude(e) => constants.hbar * self.omega_0() * e * e / (2.0 * self.kappa),
        }
    }
}

/// Full physical configuration of the two-body setup.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParameters {
    pub constants: PhysicalConstants,
    /// Source mass, kg.
    pub m1: f64,
    /// Probe mass, kg.
    pub m2: f64,
    pub geometry: Geometry,
    pub mech_x: MechanicalAxis,
    pub mech_y: MechanicalAxis,
    pub cav_x: CavityAxis,
    pub cav_y: CavityAxis,
    /// Bath temperature, K.
    pub temperature: f64,
}

impl SystemParameters {
    pub fn mech(&self, axis: Axis) -> &MechanicalAxis {
        match axis {
            Axis::X => &self.mech_x,
            Axis::Y => &self.mech_y,
        }
    }

    pub fn cav(&self, axis: Axis) -> &CavityAxis {
        match axis {
            Axis::X => &self.cav_x,
            Axis::Y => &self.cav_y,
        }
    }

    /// Check every invariant; return the record wrapped as proof of validity.
    pub fn validate(self) -> Result<ValidatedParams, ValidationError> {
        let mut v = Violations::default();

        v.finite("m1", self.m1);
        v.positive("m1", self.m1);
        v.finite("m2", self.m2);
        v.positive("m2", self.m2);
        v.finite("temperature", self.temperature);
        v.positive("temperature", self.temperature);

        v.finite("geometry.d_x", self.geometry.d_x);
        v.positive("geometry.d_x", self.geometry.d_x);
        v.finite("geometry.d_y", self.geometry.d_y);
        v.positive("geometry.d_y", self.geometry.d_y);
        v.finite("geometry.x2_bar", self.geometry.x2_bar);
        v.finite("geometry.farfield_factor", self.geometry.farfield_factor);
        if self.geometry.farfield_factor.is_finite() && self.geometry.farfield_factor < 1.0 {
            v.push("geometry.farfield_factor", "must be at least 1");
        }

        for (name, mech) in [("mech_x", &self.mech_x), ("mech_y", &self.mech_y)] {
            v.finite(&format!("{name}.omega"), mech.omega);
            v.positive(&format!("{name}.omega"), mech.omega);
            v.finite(&format!("{name}.gamma"), mech.gamma);
            v.positive(&format!("{name}.gamma"), mech.gamma);
            v.finite(&format!("{name}.r_osc"), mech.r_osc);
        }

        for (name, cav) in [("cav_x", &self.cav_x), ("cav_y", &self.cav_y)] {
            v.finite(&format!("{name}.omega_c"), cav.omega_c);
            v.positive(&format!("{name}.omega_c"), cav.omega_c);
            v.finite(&format!("{name}.delta_0"), cav.delta_0);
            if cav.delta_0.is_finite() && cav.omega_c.is_finite() && cav.omega_0() <= 0.0 {
                v.push(
                    &format!("{name}.delta_0"),
                    "laser frequency omega_c - delta_0 must be positive",
                );
            }
            v.finite(&format!("{name}.kappa"), cav.kappa);
            v.positive(&format!("{name}.kappa"), cav.kappa);
            v.finite(&format!("{name}.length"), cav.length);
            v.positive(&format!("{name}.length"), cav.length);
            let drive = cav.drive.value();
            v.finite(&format!("{name}.drive"), drive);
            if drive < 0.0 {
                v.push(&format!("{name}.drive"), "must be non-negative");
            }
        }

        if v.0.is_empty() {
            Ok(ValidatedParams(self))
        } else {
            Err(ValidationError(v.0))
        }
    }
}

#[derive(Default)]
struct Violations(Vec<String>);

impl Violations {
    fn push(&mut self, path: &str, msg: &str) {
        self.0.push(format!("{path}: {msg}"));
    }

    fn finite(&mut self, path: &str, value: f64) {
        if !value.is_finite() {
            self.push(path, "must be finite");
        }
    }

    fn positive(&mut self, path: &str, value: f64) {
        if value.is_finite() && value <= 0.0 {
            self.push(path, "must be positive");
        }
    }
}

/// All invariant violations found in a [`SystemParameters`] record.
#[derive(Debug, Error)]
pub struct ValidationError(pub Vec<String>);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid parameters: {}", self.0.join("; "))
    }
}

/// A [`SystemParameters`] record that has passed [`SystemParameters::validate`].
///
/// Immutable after construction; shared read-only across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedParams(SystemParameters);

impl std::ops::Deref for ValidatedParams {
    type Target = SystemParameters;

    fn deref(&self) -> &SystemParameters {
        &self.0
    }
}

impl ValidatedParams {
    pub fn as_inner(&self) -> &SystemParameters {
        &self.0
    }

    pub fn into_inner(self) -> SystemParameters {
        self.0
    }

    /// Re-validate after an edit to the inner record.
    pub fn with(&self, edit: impl FnOnce(&mut SystemParameters)) -> Result<Self, ValidationError> {
        let mut inner = self.0.clone();
        edit(&mut inner);
        inner.validate()
    }

    /// Quantities derived from the raw record.
    pub fn derive(&self) -> DerivedQuantities {
        let p = &self.0;
        DerivedQuantities {
            d: p.geometry.d(),
            chi: [p.cav_x.chi(), p.cav_y.chi()],
            drive_amplitude: [
                p.cav_x.drive_amplitude(&p.constants),
                p.cav_y.drive_amplitude(&p.constants),
            ],
            detuning: [p.cav_x.detuning(), p.cav_y.detuning()],
        }
    }

    /// Stable hash of the resolved physical record, used to fingerprint
    /// outputs and to detect mismatched coefficient sources.
    pub fn fingerprint(&self) -> u64 {
        fn put(h: &mut Fnv64, x: f64) {
            h.write(&x.to_bits().to_le_bytes());
        }
        let p = &self.0;
        let mut h = Fnv64::new();
        for x in [
            p.constants.g,
            p.constants.hbar,
            p.constants.k_b,
            p.m1,
            p.m2,
            p.geometry.d_x,
            p.geometry.d_y,
            p.geometry.x2_bar,
            p.geometry.farfield_factor,
            p.temperature,
        ] {
            put(&mut h, x);
        }
        for mech in [&p.mech_x, &p.mech_y] {
            put(&mut h, mech.omega);
            put(&mut h, mech.gamma);
            put(&mut h, mech.r_osc);
        }
        for cav in [&p.cav_x, &p.cav_y] {
            put(&mut h, cav.omega_c);
            put(&mut h, cav.delta_0);
            put(&mut h, cav.kappa);
            put(&mut h, cav.length);
            match cav.drive {
                Drive::Power(w) => {
                    h.write(b"P");
                    put(&mut h, w);
                }
                Drive::Amplitude(e) => {
                    h.write(b"E");
                    put(&mut h, e);
                }
            }
        }
        h.finish()
    }

    /// Fingerprint formatted as fixed-width hex.
    pub fn fingerprint_hex(&self) -> String {
        format!("{:016x}", self.fingerprint())
    }
}

/// Values computed from the validated record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Source–probe distance sqrt(d_x^2 + d_y^2), m.
    pub d: f64,
    /// Per-axis coupling chi_i = omega_c/L, rad s^-1 m^-1 (x then y).
    pub chi: [f64; 2],
    /// Per-axis input drive amplitude, 1/s (x then y).
    pub drive_amplitude: [f64; 2],
    /// Per-axis pump detuning Delta_0, rad/s (x then y).
    pub detuning: [f64; 2],
}

/// FNV-1a 64-bit.
pub(crate) struct Fnv64(u64);

impl Fnv64 {
    pub(crate) fn new() -> Self {
        Fnv64(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}
