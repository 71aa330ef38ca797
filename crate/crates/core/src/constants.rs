//! Physical constants (CODATA 2018). Fixed values, not user-configurable.

/// Fundamental constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant, m^3 kg^-1 s^-2.
    pub g: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Boltzmann constant, J K^-1.
    pub k_b: f64,
}

impl PhysicalConstants {
    pub const fn codata() -> Self {
        Self {
            g: 6.674_30e-11,
            hbar: 1.054_571_817e-34,
            k_b: 1.380_649e-23,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Bose occupation 1/(exp(hbar*omega/kB*T) - 1).
pub fn thermal_occupation(constants: &PhysicalConstants, omega: f64, temperature: f64) -> f64 {
    1.0 / (constants.hbar * omega / (constants.k_b * temperature)).exp_m1()
}
