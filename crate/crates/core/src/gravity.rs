//! Force-expansion coefficients of the source–probe gravitational
//! interaction, exact and in the far-field limit, plus the steady-state
//! displacements they induce.
//!
//! The force on the probe along axis i, expanded to first order in the
//! fluctuations, is C0_i + C1_i * delta_i + C2 * delta_j (j != i). The n = 2
//! entry is the same for both axes, so a single `c2` is stored.

use crate::model::{Axis, Scenario, ValidatedParams};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GravityError {
    #[error("scenario {0} has no branch sign; use the quantum branches here")]
    NotABranch(Scenario),
    #[error("singular configuration: source and probe coincide (h = 0)")]
    SingularConfiguration,
    #[error(
        "far-field guard violated: d_x = {d_x:e} < {factor:e} * |x2_bar| = {bound:e}; \
         use exact_coefficients"
    )]
    FarFieldGuard { d_x: f64, factor: f64, bound: f64 },
    #[error("classical average requires the alpha and beta branches, got {0} and {1}")]
    WrongBranches(Scenario, Scenario),
    #[error("classical average inputs come from different parameter sets")]
    MismatchedSources,
}

/// Force-expansion coefficients for one scenario.
///
/// `c0_*` are constant forces in N; `c1_*` and `c2` are force gradients in
/// N/m. `source_id` ties the record to the parameter set it was computed
/// from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityCoefficients {
    pub c0_x: f64,
    pub c0_y: f64,
    pub c1_x: f64,
    pub c1_y: f64,
    pub c2: f64,
    pub scenario: Scenario,
    pub source_id: u64,
}

impl GravityCoefficients {
    /// All-zero coefficients (decoupled probe), tagged with a scenario.
    pub fn zero(scenario: Scenario, source_id: u64) -> Self {
        Self {
            c0_x: 0.0,
            c0_y: 0.0,
            c1_x: 0.0,
            c1_y: 0.0,
            c2: 0.0,
            scenario,
            source_id,
        }
    }

    pub fn c1(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.c1_x,
            Axis::Y => self.c1_y,
        }
    }
}

/// Exact coefficients for a quantum branch, valid at any probe offset.
///
/// With s the branch sign, h = sqrt((x2_bar - s d_x)^2 + d_y^2) and
/// g = G m1 m2 / h^3:
///   C0_x = g (s d_x - x2_bar),          C0_y = g d_y,
///   C1_x = g [3 (x2_bar - s d_x)^2 - h^2] / h^2,
///   C1_y = g (3 d_y^2 - h^2) / h^2,
///   C2   = -3 g (s d_x - x2_bar) d_y / h^2.
pub fn exact_coefficients(
    params: &ValidatedParams,
    scenario: Scenario,
) -> Result<GravityCoefficients, GravityError> {
    let s = scenario
        .branch_sign()
        .ok_or(GravityError::NotABranch(scenario))?;
    let geo = &params.geometry;
    let dx_off = geo.x2_bar - s * geo.d_x;
    let h2 = dx_off * dx_off + geo.d_y * geo.d_y;
    if h2 == 0.0 {
        return Err(GravityError::SingularConfiguration);
    }
    let h = h2.sqrt();
    let g = params.constants.g * params.m1 * params.m2 / (h2 * h);
    Ok(GravityCoefficients {
        c0_x: g * (s * geo.d_x - geo.x2_bar),
        c0_y: g * geo.d_y,
        c1_x: g * (3.0 * dx_off * dx_off - h2) / h2,
        c1_y: g * (3.0 * geo.d_y * geo.d_y - h2) / h2,
        c2: -3.0 * g * (s * geo.d_x - geo.x2_bar) * geo.d_y / h2,
        scenario,
        source_id: params.fingerprint(),
    })
}

/// Far-field coefficients (d_x >> |x2_bar|, h -> d):
///   C1_x = G m1 m2 (2 d_x^2 - d_y^2) / d^5,
///   C1_y = G m1 m2 (2 d_y^2 - d_x^2) / d^5,
///   C2   = -3 G m1 m2 d_x d_y s / d^5 for a branch, 0 for the classical
///          average.
/// C0 terms are the exact ones evaluated at x2_bar = 0 (the classical C0_x
/// averages to zero).
pub fn farfield_coefficients(
    params: &ValidatedParams,
    scenario: Scenario,
) -> Result<GravityCoefficients, GravityError> {
    let geo = &params.geometry;
    if !geo.farfield_ok() {
        return Err(GravityError::FarFieldGuard {
            d_x: geo.d_x,
            factor: geo.farfield_factor,
            bound: geo.farfield_factor * geo.x2_bar.abs(),
        });
    }
    let d = geo.d();
    let d5 = d.powi(5);
    let gg = params.constants.g * params.m1 * params.m2;
    let grav3 = gg / (d * d * d);
    let (c0_x, c2) = match scenario.branch_sign() {
        Some(s) => (grav3 * s * geo.d_x, -3.0 * gg * geo.d_x * geo.d_y * s / d5),
        None => (0.0, 0.0),
    };
    Ok(GravityCoefficients {
        c0_x,
        c0_y: grav3 * geo.d_y,
        c1_x: gg * (2.0 * geo.d_x * geo.d_x - geo.d_y * geo.d_y) / d5,
        c1_y: gg * (2.0 * geo.d_y * geo.d_y - geo.d_x * geo.d_x) / d5,
        c2,
        scenario,
        source_id: params.fingerprint(),
    })
}

/// Entrywise mean of the two quantum branches; this is the classical force
/// model.
pub fn classical_average(
    alpha: &GravityCoefficients,
    beta: &GravityCoefficients,
) -> Result<GravityCoefficients, GravityError> {
    if alpha.scenario != Scenario::QuantumAlpha || beta.scenario != Scenario::QuantumBeta {
        return Err(GravityError::WrongBranches(alpha.scenario, beta.scenario));
    }
    if alpha.source_id != beta.source_id {
        return Err(GravityError::MismatchedSources);
    }
    Ok(GravityCoefficients {
        c0_x: 0.5 * (alpha.c0_x + beta.c0_x),
        c0_y: 0.5 * (alpha.c0_y + beta.c0_y),
        c1_x: 0.5 * (alpha.c1_x + beta.c1_x),
        c1_y: 0.5 * (alpha.c1_y + beta.c1_y),
        c2: 0.5 * (alpha.c2 + beta.c2),
        scenario: Scenario::Classical,
        source_id: alpha.source_id,
    })
}

/// Steady-state displacement of the probe (far-field, recentered trap):
/// branch gamma pulls the probe to x = G m1 d_x s / (omega_x^2 d^3); the
/// classical model leaves it centered. Both share
/// y = G m1 d_y / (omega_y^2 d^3).
pub fn steady_displacement(params: &ValidatedParams, scenario: Scenario) -> (f64, f64) {
    let geo = &params.geometry;
    let d3 = geo.d().powi(3);
    let gm1 = params.constants.g * params.m1;
    let x = match scenario.branch_sign() {
        Some(s) => gm1 * geo.d_x * s / (params.mech_x.omega.powi(2) * d3),
        None => 0.0,
    };
    let y = gm1 * geo.d_y / (params.mech_y.omega.powi(2) * d3);
    (x, y)
}

/// Trap center that cancels the static radiation-pressure push:
/// r_osc = -hbar chi |a|^2 / (m2 omega^2).
pub fn trap_recenter(params: &ValidatedParams, mean_photon: f64, axis: Axis) -> f64 {
    let chi = params.cav(axis).chi();
    let omega = params.mech(axis).omega;
    -params.constants.hbar * chi * mean_photon / (params.m2 * omega * omega)
}
