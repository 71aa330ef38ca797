//! Linearized fluctuation dynamics: cavity mean fields, the 8x8 drift and
//! diffusion matrices in a nondimensional quadrature basis, drift stability,
//! and the effective mechanical response dressed by the detuned cavity.
//!
//! Basis order: (x~, p~_x, y~, p~_y, X_x, Y_x, X_y, Y_y). Mechanical
//! quadratures are scaled by ell_i = sqrt(hbar/(m2 omega_i)) = sqrt(2) x_zpf,
//! i.e. x~ = delta/ell and p~ = delta_p * ell / hbar, so every mode has
//! vacuum variance 1/2 and thermal variance n + 1/2. The raw SI covariance
//! would span tens of orders of magnitude and wreck the steady-state solve;
//! reported physical quantities are rescaled back on output.
//!
//! Each cavity's quadrature frame is rotated so its mean field is real and
//! positive. This is a gauge choice: spectra and correlation measures do not
//! depend on it, and [`build_dynamics_with_phases`] exists to check exactly
//! that.

use crate::constants::thermal_occupation;
use crate::gravity::GravityCoefficients;
use crate::model::{Axis, CavityAxis, Scenario, ValidatedParams};
use nalgebra::{Complex, SMatrix};
use thiserror::Error;

pub type Mat8 = SMatrix<f64, 8, 8>;

/// Ordered labels of the fluctuation basis.
pub const BASIS: [&str; 8] = ["x~", "p~_x", "y~", "p~_y", "X_x", "Y_x", "X_y", "Y_y"];

/// Indices of the optical quadratures within the basis.
pub const OPTICAL_RANGE: std::ops::Range<usize> = 4..8;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("singular drive: kappa = 0 with zero detuning")]
    SingularDrive,
    #[error("diffusion matrix has a negative eigenvalue: {0:e}")]
    IndefiniteDiffusion(f64),
    #[error("eigenvalue computation failed to converge")]
    EigenFailure,
    #[error("effective response undefined: kappa = 0 makes the cavity filter singular")]
    SingularFilter,
    #[error("no steady state: drift is not stable (max Re eigenvalue {0:e} >= 0)")]
    Unstable(f64),
}

/// Steady intracavity field of one driven cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanField {
    /// Complex amplitude a = E / (kappa + i Delta_0), photon-amplitude units.
    pub a_bar: Complex<f64>,
    /// Effective detuning; the static displacement shift is neglected, so
    /// this is the bare pump detuning.
    pub delta: f64,
    /// Mean photon number |a|^2.
    pub n_photon: f64,
}

/// Steady field of a cavity axis. The radiation-pressure shift of the
/// resonance is dropped (weak-coupling approximation), so a solves
/// a = E / (kappa + i Delta_0).
pub fn mean_field(
    cav: &CavityAxis,
    constants: &crate::constants::PhysicalConstants,
) -> Result<MeanField, DynamicsError> {
    let delta = cav.detuning();
    if cav.kappa == 0.0 && delta == 0.0 {
        return Err(DynamicsError::SingularDrive);
    }
    let denom = Complex::new(cav.kappa, delta);
    let a_bar = Complex::new(cav.drive_amplitude(constants), 0.0) / denom;
    Ok(MeanField {
        a_bar,
        delta,
        n_photon: a_bar.norm_sqr(),
    })
}

/// Drift and diffusion of the linearized eight-dimensional system.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDynamics {
    /// Drift matrix A, 1/s, in the nondimensional basis.
    pub drift: Mat8,
    /// Symmetric PSD diffusion matrix D (Markovian bath weights).
    pub diffusion: Mat8,
    /// Basis labels, fixed order.
    pub basis: [&'static str; 8],
    /// Zero-point lengths x_zpf_i = sqrt(hbar/(2 m2 omega_i)), m (x then y).
    pub x_zpf: [f64; 2],
    /// Quadrature length scales ell_i = sqrt(2) x_zpf_i, m.
    pub quad_scale: [f64; 2],
    /// Linearized optomechanical rates g_i = sqrt(2) chi_i |a_i| ell_i, 1/s.
    pub coupling: [f64; 2],
    /// Mechanical frequencies, damping rates; cavity linewidths, detunings.
    pub omega_mech: [f64; 2],
    pub gamma_mech: [f64; 2],
    pub kappa: [f64; 2],
    pub detuning: [f64; 2],
    /// Thermal occupations of the two mechanical baths.
    pub n_bar: [f64; 2],
    pub scenario: Scenario,
}

/// Build the fluctuation dynamics in the gauge where both mean fields are
/// real and positive.
pub fn build_dynamics(
    params: &ValidatedParams,
    coeffs: &GravityCoefficients,
) -> Result<LinearDynamics, DynamicsError> {
    build_dynamics_with_phases(params, coeffs, [0.0, 0.0])
}

/// Same dynamics with each cavity's mean-field phase set explicitly instead
/// of gauged away. Spectra and correlation measures must not depend on the
/// phases; tests rely on this entry point to verify that.
pub fn build_dynamics_with_phases(
    params: &ValidatedParams,
    coeffs: &GravityCoefficients,
    phases: [f64; 2],
) -> Result<LinearDynamics, DynamicsError> {
    let hbar = params.constants.hbar;
    let m2 = params.m2;

    let mut drift = Mat8::zeros();
    let mut diffusion = Mat8::zeros();
    let mut x_zpf = [0.0; 2];
    let mut quad_scale = [0.0; 2];
    let mut coupling = [0.0; 2];
    let mut omega_mech = [0.0; 2];
    let mut gamma_mech = [0.0; 2];
    let mut kappa = [0.0; 2];
    let mut detuning = [0.0; 2];
    let mut n_bar = [0.0; 2];

    for axis in Axis::BOTH {
        let i = axis.index();
        let mech = params.mech(axis);
        let cav = params.cav(axis);
        let field = mean_field(cav, &params.constants)?;

        let ell = (hbar / (m2 * mech.omega)).sqrt();
        let g = std::f64::consts::SQRT_2 * cav.chi() * field.a_bar.norm() * ell;
        let (sin_p, cos_p) = phases[i].sin_cos();

        x_zpf[i] = ell / std::f64::consts::SQRT_2;
        quad_scale[i] = ell;
        coupling[i] = g;
        omega_mech[i] = mech.omega;
        gamma_mech[i] = mech.gamma;
        kappa[i] = cav.kappa;
        detuning[i] = field.delta;
        n_bar[i] = thermal_occupation(&params.constants, mech.omega, params.temperature);

        let q = 2 * i; // mechanical block offset
        let c = 4 + 2 * i; // cavity block offset

        // x~' = omega p~
        drift[(q, q + 1)] = mech.omega;
        // p~' = -[omega - C1/(m2 omega)] x~ - gamma p~ + g (cos X + sin Y)
        drift[(q + 1, q)] = -(mech.omega - coeffs.c1(axis) / (m2 * mech.omega));
        drift[(q + 1, q + 1)] = -mech.gamma;
        drift[(q + 1, c)] = g * cos_p;
        drift[(q + 1, c + 1)] = g * sin_p;
        // X' = -kappa X + Delta Y - g sin x~
        drift[(c, c)] = -cav.kappa;
        drift[(c, c + 1)] = field.delta;
        drift[(c, q)] = -g * sin_p;
        // Y' = -Delta X - kappa Y + g cos x~
        drift[(c + 1, c)] = -field.delta;
        drift[(c + 1, c + 1)] = -cav.kappa;
        drift[(c + 1, q)] = g * cos_p;

        // Markovian bath: momentum heating gamma (2 n + 1), vacuum-limited
        // cavity inputs kappa per quadrature.
        diffusion[(q + 1, q + 1)] = mech.gamma * (2.0 * n_bar[i] + 1.0);
        diffusion[(c, c)] = cav.kappa;
        diffusion[(c + 1, c + 1)] = cav.kappa;
    }

    // gravitational x–y cross coupling, symmetric in the scaled basis:
    // C2 ell_x ell_y / hbar = C2 / (m2 sqrt(omega_x omega_y))
    let cross = coeffs.c2 * quad_scale[0] * quad_scale[1] / hbar;
    drift[(1, 2)] = cross;
    drift[(3, 0)] = cross;

    let min_eig = diffusion
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -1e-12 * diffusion.norm() {
        return Err(DynamicsError::IndefiniteDiffusion(min_eig));
    }

    Ok(LinearDynamics {
        drift,
        diffusion,
        basis: BASIS,
        x_zpf,
        quad_scale,
        coupling,
        omega_mech,
        gamma_mech,
        kappa,
        detuning,
        n_bar,
        scenario: coeffs.scenario,
    })
}

/// Drift spectrum and stability verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Largest real part over the drift spectrum, 1/s.
    pub max_real_part: f64,
    /// All eigenvalues as (re, im) pairs, sorted by real part descending.
    pub eigenvalues: Vec<(f64, f64)>,
}

/// Eigenvalue stability of the drift: stable iff every eigenvalue has a
/// strictly negative real part. The drift is balanced first (permutation
/// isolation followed by radix-2 scaling) because the preset couplings span
/// many orders of magnitude and an unbalanced Schur pass loses the small
/// eigenvalues.
pub fn stability(dyn_: &LinearDynamics) -> Result<StabilityReport, DynamicsError> {
    let mut pairs = drift_eigenvalues(&dyn_.drift);
    if pairs
        .iter()
        .any(|(re, im)| !re.is_finite() || !im.is_finite())
    {
        return Err(DynamicsError::EigenFailure);
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let max_real_part = pairs[0].0;
    Ok(StabilityReport {
        stable: max_real_part < 0.0,
        max_real_part,
        eigenvalues: pairs,
    })
}

fn drift_eigenvalues(a: &Mat8) -> Vec<(f64, f64)> {
    // permutation isolation: a variable whose row (or column) has no
    // off-diagonal entries among the still-active set contributes its
    // diagonal as an exact eigenvalue and drops out of the iterative solve
    let mut eigs: Vec<(f64, f64)> = Vec::new();
    let mut active: Vec<usize> = (0..8).collect();
    loop {
        let mut isolated = None;
        'search: for (pos, &i) in active.iter().enumerate() {
            let row_empty = active.iter().all(|&j| j == i || a[(i, j)] == 0.0);
            let col_empty = active.iter().all(|&j| j == i || a[(j, i)] == 0.0);
            if row_empty || col_empty {
                isolated = Some(pos);
                break 'search;
            }
        }
        match isolated {
            Some(pos) => {
                let i = active.remove(pos);
                eigs.push((a[(i, i)], 0.0));
            }
            None => break,
        }
    }
    if active.is_empty() {
        return eigs;
    }
    let n = active.len();
    let sub = nalgebra::DMatrix::<f64>::from_fn(n, n, |r, c| a[(active[r], active[c])]);
    let balanced = balance(sub);
    for z in balanced.complex_eigenvalues().iter() {
        eigs.push((z.re, z.im));
    }
    eigs
}

/// Radix-2 balancing (diagonal similarity), exact in floating point.
fn balance(a: nalgebra::DMatrix<f64>) -> nalgebra::DMatrix<f64> {
    let mut m = a;
    let n = m.nrows();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    r += m[(i, j)].abs();
                    c += m[(j, i)].abs();
                }
            }
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut c2 = c;
            let mut r2 = r;
            while c2 < r2 / 2.0 {
                c2 *= 2.0;
                r2 /= 2.0;
                f *= 2.0;
            }
            while c2 >= r2 * 2.0 {
                c2 /= 2.0;
                r2 *= 2.0;
                f /= 2.0;
            }
            if (c2 + r2) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            return m;
        }
    }
}

/// Frequency-dependent mechanical response of one axis, dressed by its
/// cavity and softened/stiffened by the gravitational spring term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveResponse {
    omega: f64,
    gamma: f64,
    kappa: f64,
    delta: f64,
    /// hbar chi^2 |a|^2 / m2, the optical dressing strength.
    strength: f64,
    /// C1 / m2, the gravitational spring correction.
    spring: f64,
}

/// Build the effective response for one axis:
///   omega_eff^2(w) = omega^2
///     + 2 hbar chi^2 |a|^2 Delta (w^2 - kappa^2 - Delta^2) / (m2 P(w))
///     - C1/m2,
///   gamma_eff(w) = gamma + 4 hbar chi^2 |a|^2 Delta kappa / (m2 P(w)),
/// with P(w) = (kappa^2 + Delta^2 + w^2)^2 - 4 Delta^2 w^2.
pub fn effective_response(
    params: &ValidatedParams,
    mean: &MeanField,
    coeffs: &GravityCoefficients,
    axis: Axis,
) -> Result<EffectiveResponse, DynamicsError> {
    let cav = params.cav(axis);
    if cav.kappa == 0.0 {
        // P(w) vanishes at w = Delta in that case
        return Err(DynamicsError::SingularFilter);
    }
    let chi = cav.chi();
    Ok(EffectiveResponse {
        omega: params.mech(axis).omega,
        gamma: params.mech(axis).gamma,
        kappa: cav.kappa,
        delta: mean.delta,
        strength: params.constants.hbar * chi * chi * mean.n_photon / params.m2,
        spring: coeffs.c1(axis) / params.m2,
    })
}

impl EffectiveResponse {
    fn filter_denominator(&self, w: f64) -> f64 {
        let s = self.kappa * self.kappa + self.delta * self.delta + w * w;
        s * s - 4.0 * self.delta * self.delta * w * w
    }

    /// Effective squared frequency at probe frequency w, rad^2/s^2.
    pub fn omega_eff_sq(&self, w: f64) -> f64 {
        let p = self.filter_denominator(w);
        self.omega * self.omega
            + 2.0
                * self.strength
                * self.delta
                * (w * w - self.kappa * self.kappa - self.delta * self.delta)
                / p
            - self.spring
    }

    /// Effective damping at probe frequency w, rad/s.
    pub fn gamma_eff(&self, w: f64) -> f64 {
        self.gamma + 4.0 * self.strength * self.delta * self.kappa / self.filter_denominator(w)
    }

    /// Self-consistent resonance: the root of omega_eff^2(w) - w^2 inside
    /// (lo, hi), found by bisection on a sign change.
    pub fn resonance(&self, lo: f64, hi: f64) -> Option<f64> {
        let f = |w: f64| self.omega_eff_sq(w) - w * w;
        let n = 512;
        let step = (hi - lo) / n as f64;
        let mut a = lo;
        let mut fa = f(a);
        for k in 1..=n {
            let b = lo + step * k as f64;
            let fb = f(b);
            if fa == 0.0 {
                return Some(a);
            }
            if fa.signum() != fb.signum() {
                let (mut x0, mut x1, mut f0) = (a, b, fa);
                for _ in 0..200 {
                    let mid = 0.5 * (x0 + x1);
                    let fm = f(mid);
                    if fm == 0.0 || (x1 - x0) < f64::EPSILON * mid.abs() {
                        return Some(mid);
                    }
                    if f0.signum() == fm.signum() {
                        x0 = mid;
                        f0 = fm;
                    } else {
                        x1 = mid;
                    }
                }
                return Some(0.5 * (x0 + x1));
            }
            a = b;
            fa = fb;
        }
        None
    }
}
