//! Steady-state covariance analysis: Lyapunov solve, the all-optical
//! sub-block, its inter-mode norm, and the Gaussian discord of the two
//! cavity fields.
//!
//! Covariances are sigma_ij = <{v_i, v_j}>/2 in the nondimensional basis of
//! [`crate::dynamics`], vacuum variance 1/2. Discord is reported in nats.

use crate::dynamics::{build_dynamics, stability, DynamicsError, LinearDynamics, Mat8};
use crate::gravity::{farfield_coefficients, GravityError};
use crate::model::{Scenario, ValidatedParams};
use nalgebra::{DMatrix, SMatrix};
use rayon::prelude::*;
use thiserror::Error;

pub type Mat4 = SMatrix<f64, 4, 4>;

/// Residual threshold above which a Lyapunov solution is flagged.
pub const LYAPUNOV_RESIDUAL_BOUND: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CorrelationsError {
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("no steady state: drift is unstable (max Re eigenvalue {0:e})")]
    NoSteadyState(f64),
    #[error("Lyapunov system is singular")]
    SingularLyapunov,
    #[error(
        "unphysical covariance: minimum symplectic eigenvalue {0:e} is below the vacuum bound 1/2"
    )]
    Unphysical(f64),
    #[error("sweep range invalid: {0}")]
    BadSweep(String),
    #[error("sweep produced no stable points")]
    EmptySweep,
}

/// Solution of A sigma + sigma A^T + D = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSolution {
    /// Symmetrized steady-state covariance.
    pub sigma: Mat8,
    /// ||A sigma + sigma A^T + D||_F / ||D||_F, measured on the returned
    /// sigma.
    pub residual_rel: f64,
    /// Set when the residual exceeds [`LYAPUNOV_RESIDUAL_BOUND`]; the
    /// solution is returned anyway with the measured residual attached.
    pub ill_conditioned: bool,
}

/// Solve the steady-state Lyapunov equation by vectorization:
/// (I (x) A + A (x) I) vec(sigma) = -vec(D). Requires a stable drift.
pub fn lyapunov_steady_state(dyn_: &LinearDynamics) -> Result<LyapunovSolution, CorrelationsError> {
    let report = stability(dyn_)?;
    if !report.stable {
        return Err(CorrelationsError::NoSteadyState(report.max_real_part));
    }
    let a = DMatrix::<f64>::from_fn(8, 8, |i, j| dyn_.drift[(i, j)]);
    let eye = DMatrix::<f64>::identity(8, 8);
    let k = eye.kronecker(&a) + a.kronecker(&eye);
    let rhs = DMatrix::<f64>::from_fn(64, 1, |i, _| -dyn_.diffusion[(i % 8, i / 8)]);
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or(CorrelationsError::SingularLyapunov)?;
    let mut sigma = Mat8::zeros();
    for j in 0..8 {
        for i in 0..8 {
            sigma[(i, j)] = sol[(j * 8 + i, 0)];
        }
    }
    sigma = (sigma + sigma.transpose()) * 0.5;
    let residual = dyn_.drift * sigma + sigma * dyn_.drift.transpose() + dyn_.diffusion;
    let residual_rel = residual.norm() / dyn_.diffusion.norm();
    Ok(LyapunovSolution {
        sigma,
        residual_rel,
        ill_conditioned: !residual_rel.is_finite() || residual_rel > LYAPUNOV_RESIDUAL_BOUND,
    })
}

/// Rows and columns of the two cavity modes (X_x, Y_x, X_y, Y_y).
pub fn optical_block(sigma_full: &Mat8) -> Mat4 {
    sigma_full.fixed_view::<4, 4>(4, 4).into_owned()
}

/// Entrywise 1-norm of the inter-mode block of the all-optical covariance:
/// sum of |sigma_ij| over rows {X_x, Y_x} and columns {X_y, Y_y}. Vanishes
/// exactly whenever nothing couples the two cavities.
pub fn sigma_tot(sigma_optical: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..2 {
        for j in 2..4 {
            s += sigma_optical[(i, j)].abs();
        }
    }
    s
}

/// Diagnostic companion to [`sigma_tot`]: entrywise 1-norm of every
/// off-diagonal entry of the 4x4 optical block, intra-mode terms included.
pub fn sigma_offdiag_total(sigma_optical: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += sigma_optical[(i, j)].abs();
            }
        }
    }
    s
}

/// Minimum symplectic eigenvalue of a covariance in (x, p) interleaved
/// order, vacuum-1/2 units. Physical states satisfy nu_min >= 1/2.
pub fn min_symplectic_eigenvalue(sigma: &DMatrix<f64>) -> f64 {
    let n = sigma.nrows();
    debug_assert!(n.is_multiple_of(2) && sigma.ncols() == n);
    let mut omega = DMatrix::<f64>::zeros(n, n);
    for m in 0..n / 2 {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    let eig = (omega * sigma).complex_eigenvalues();
    eig.iter()
        .map(|z| z.im.abs())
        .filter(|v| *v > 0.0 || n == 0)
        .fold(f64::INFINITY, f64::min)
}

/// Which cavity mode the Gaussian measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredMode {
    /// Measure the second (y-cavity) mode; conditional state of the first.
    Second,
    /// Measure the first (x-cavity) mode; conditional state of the second.
    First,
}

/// Entropy-like function of a symplectic eigenvalue (vacuum-1 units), nats.
fn h_entropy(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    let a = (x + 1.0) / 2.0;
    let b = (x - 1.0) / 2.0;
    a * a.ln() - b * b.ln()
}

fn det2(m: &SMatrix<f64, 2, 2>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Gaussian discord of a two-mode covariance (vacuum-1/2 units), in nats,
/// minimized over single-mode Gaussian measurements on the chosen mode.
///
/// Uses the closed form in the symplectic invariants A = det(alpha),
/// B = det(beta), C = det(gamma), D = det(sigma) (doubled units):
///   discord = h(sqrt B) - h(nu_-) - h(nu_+) + h(sqrt E_min),
/// with E_min given by one of two branches depending on whether
/// (D - AB)^2 <= (1 + B) C^2 (A + D).
pub fn gaussian_discord(sigma_optical: &Mat4) -> Result<f64, CorrelationsError> {
    gaussian_discord_on(sigma_optical, MeasuredMode::Second)
}

pub fn gaussian_discord_on(
    sigma_optical: &Mat4,
    measured: MeasuredMode,
) -> Result<f64, CorrelationsError> {
    let s = match measured {
        MeasuredMode::Second => *sigma_optical,
        MeasuredMode::First => swap_modes(sigma_optical),
    };
    // physicality first
    let dm = DMatrix::<f64>::from_fn(4, 4, |i, j| s[(i, j)]);
    let nu_min = min_symplectic_eigenvalue(&dm);
    if nu_min < 0.5 - 1e-9 {
        return Err(CorrelationsError::Unphysical(nu_min));
    }

    let s2 = s * 2.0; // vacuum-1 units
    let alpha = s2.fixed_view::<2, 2>(0, 0).into_owned();
    let beta = s2.fixed_view::<2, 2>(2, 2).into_owned();
    let gamma = s2.fixed_view::<2, 2>(0, 2).into_owned();
    let a = det2(&alpha);
    let b = det2(&beta);
    let c = det2(&gamma);
    let d = s2.fixed_view::<4, 4>(0, 0).into_owned().determinant();

    if c == 0.0 && gamma.norm() == 0.0 {
        // product state
        return Ok(0.0);
    }

    let delta = a + b + 2.0 * c;
    let disc = (delta * delta - 4.0 * d).max(0.0).sqrt();
    let nu_minus = ((delta - disc) / 2.0).max(0.0).sqrt();
    let nu_plus = ((delta + disc) / 2.0).sqrt();

    let e_min = if (d - a * b).powi(2) <= (1.0 + b) * c * c * (a + d) {
        let root = (c * c + (b - 1.0) * (d - a)).max(0.0).sqrt();
        (2.0 * c * c + (b - 1.0) * (d - a) + 2.0 * c.abs() * root) / ((b - 1.0) * (b - 1.0))
    } else {
        let root = (c.powi(4) + (d - a * b).powi(2) - 2.0 * c * c * (a * b + d))
            .max(0.0)
            .sqrt();
        (a * b - c * c + d - root) / (2.0 * b)
    };

    let discord = h_entropy(b.sqrt()) - h_entropy(nu_minus) - h_entropy(nu_plus)
        + h_entropy(e_min.max(0.0).sqrt());
    // clamp entropy-cancellation roundoff at zero
    Ok(if discord < 0.0 && discord > -1e-9 {
        0.0
    } else {
        discord
    })
}

fn swap_modes(s: &Mat4) -> Mat4 {
    let mut p = Mat4::zeros();
    p[(0, 2)] = 1.0;
    p[(1, 3)] = 1.0;
    p[(2, 0)] = 1.0;
    p[(3, 1)] = 1.0;
    p * s * p.transpose()
}

/// Full covariance analysis of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub sigma_full: Mat8,
    pub sigma_optical: Mat4,
    /// Inter-mode entrywise 1-norm of the optical block.
    pub sigma_tot: f64,
    /// All off-diagonal entries of the optical block (diagnostic).
    pub sigma_offdiag_total: f64,
    /// Discord with measurement on the y cavity, nats.
    pub discord_xy: f64,
    /// Discord with measurement on the x cavity, nats.
    pub discord_yx: f64,
    /// Minimum symplectic eigenvalue of the full covariance.
    pub nu_min: f64,
    pub stable: bool,
    pub scenario: Scenario,
    /// Relative Lyapunov residual of the solve.
    pub residual_rel: f64,
    /// Present when the solve was flagged ill-conditioned.
    pub warning: Option<String>,
}

impl CovarianceReport {
    pub fn compute(
        params: &ValidatedParams,
        scenario: Scenario,
    ) -> Result<Self, CorrelationsError> {
        let coeffs = farfield_coefficients(params, scenario)?;
        let dyn_ = build_dynamics(params, &coeffs)?;
        Self::from_dynamics(&dyn_, scenario)
    }

    pub fn from_dynamics(
        dyn_: &LinearDynamics,
        scenario: Scenario,
    ) -> Result<Self, CorrelationsError> {
        let sol = lyapunov_steady_state(dyn_)?;
        let sigma_optical = optical_block(&sol.sigma);
        let dm = DMatrix::<f64>::from_fn(8, 8, |i, j| sol.sigma[(i, j)]);
        let nu_min = min_symplectic_eigenvalue(&dm);
        let (discord_xy, discord_yx) = if sol.ill_conditioned {
            (f64::NAN, f64::NAN)
        } else {
            (
                gaussian_discord_on(&sigma_optical, MeasuredMode::Second)?,
                gaussian_discord_on(&sigma_optical, MeasuredMode::First)?,
            )
        };
        Ok(CovarianceReport {
            sigma_full: sol.sigma,
            sigma_optical,
            sigma_tot: sigma_tot(&sigma_optical),
            sigma_offdiag_total: sigma_offdiag_total(&sigma_optical),
            discord_xy,
            discord_yx,
            nu_min,
            stable: true,
            scenario,
            residual_rel: sol.residual_rel,
            warning: sol.ill_conditioned.then(|| {
                format!(
                    "ill-conditioned Lyapunov solve: relative residual {:e} exceeds {:e}",
                    sol.residual_rel, LYAPUNOV_RESIDUAL_BOUND
                )
            }),
        })
    }
}

/// Coupling sweep: one covariance analysis per spring-coefficient value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Spring-coefficient control values C1_x, N/m, strictly increasing.
    pub control: Vec<f64>,
    pub sigma_tot: Vec<f64>,
    pub discord_xy: Vec<f64>,
    pub discord_yx: Vec<f64>,
    pub stable: Vec<bool>,
}

/// Sweep the spring coefficient C1_x by rescaling the source mass at fixed
/// geometry. With d_x = d_y the two axes keep equal spring coefficients at
/// every point. Unstable points are flagged and carry NaN measures; an
/// all-unstable sweep is an error.
pub fn sweep_c1(
    params: &ValidatedParams,
    scenario: Scenario,
    control_range: (f64, f64),
    n_points: usize,
) -> Result<SweepResult, CorrelationsError> {
    let (lo, hi) = control_range;
    if n_points < 2 || !lo.is_finite() || !hi.is_finite() || lo >= hi || lo < 0.0 {
        return Err(CorrelationsError::BadSweep(format!(
            "need 0 <= lo < hi and n >= 2, got [{lo}, {hi}] x {n_points}"
        )));
    }
    let geo = &params.geometry;
    let factor = params.constants.g * params.m2 * (2.0 * geo.d_x * geo.d_x - geo.d_y * geo.d_y)
        / geo.d().powi(5);
    if factor.is_nan() || factor <= 0.0 {
        return Err(CorrelationsError::BadSweep(
            "c1_x per unit source mass is not positive for this geometry".into(),
        ));
    }

    let control: Vec<f64> = (0..n_points)
        .map(|k| lo + (hi - lo) * k as f64 / (n_points - 1) as f64)
        .collect();

    let points: Vec<Result<(f64, f64, f64, bool), CorrelationsError>> = control
        .par_iter()
        .map(|&c1| -> Result<(f64, f64, f64, bool), CorrelationsError> {
            let dyn_ = if c1 == 0.0 {
                let zero =
                    crate::gravity::GravityCoefficients::zero(scenario, params.fingerprint());
                build_dynamics(params, &zero)?
            } else {
                let scaled = params
                    .with(|s| s.m1 = c1 / factor)
                    .expect("scaled mass stays valid");
                let coeffs = farfield_coefficients(&scaled, scenario)?;
                build_dynamics(&scaled, &coeffs)?
            };
            let report = stability(&dyn_)?;
            if !report.stable {
                return Ok((f64::NAN, f64::NAN, f64::NAN, false));
            }
            let rep = CovarianceReport::from_dynamics(&dyn_, scenario)?;
            Ok((rep.sigma_tot, rep.discord_xy, rep.discord_yx, true))
        })
        .collect();

    let mut out = SweepResult {
        control,
        sigma_tot: Vec::with_capacity(n_points),
        discord_xy: Vec::with_capacity(n_points),
        discord_yx: Vec::with_capacity(n_points),
        stable: Vec::with_capacity(n_points),
    };
    for p in points {
        let (st, dxy, dyx, ok) = p?;
        out.sigma_tot.push(st);
        out.discord_xy.push(dxy);
        out.discord_yx.push(dyx);
        out.stable.push(ok);
    }
    if !out.stable.iter().any(|&s| s) {
        return Err(CorrelationsError::EmptySweep);
    }
    Ok(out)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle digits kept verbatim
mod tests {
    use super::*;
    use crate::config::preset;
    use crate::constants::thermal_occupation;
    use crate::gravity::GravityCoefficients;
    use crate::model::Drive;
    use crate::model::Scenario::*;
    use approx::assert_relative_eq;

    fn fig4() -> ValidatedParams {
        preset("fig4").unwrap().validate().unwrap()
    }

    fn dyn_of(dyn_drift: Mat8, diffusion: Mat8) -> LinearDynamics {
        LinearDynamics {
            drift: dyn_drift,
            diffusion,
            basis: crate::dynamics::BASIS,
            x_zpf: [1.0; 2],
            quad_scale: [1.0; 2],
            coupling: [0.0; 2],
            omega_mech: [1.0; 2],
            gamma_mech: [1.0; 2],
            kappa: [1.0; 2],
            detuning: [0.0; 2],
            n_bar: [0.0; 2],
            scenario: Classical,
        }
    }

    #[test]
    fn scalar_balance_solution() {
        // A = -(1/2) I, D = I  =>  sigma = I
        let sol =
            lyapunov_steady_state(&dyn_of(Mat8::identity() * -0.5, Mat8::identity())).unwrap();
        assert_relative_eq!((sol.sigma - Mat8::identity()).norm(), 0.0, epsilon = 1e-13);
        assert!(sol.residual_rel <= LYAPUNOV_RESIDUAL_BOUND);
        assert!(!sol.ill_conditioned);
    }

    #[test]
    fn unstable_drift_is_refused() {
        let err = lyapunov_steady_state(&dyn_of(Mat8::identity() * 0.5, Mat8::identity()));
        assert!(matches!(err, Err(CorrelationsError::NoSteadyState(_))));
    }

    #[test]
    fn decoupled_thermal_oscillator_reaches_occupation_law() {
        // dark cavities, zero gravity: every mechanical quadrature variance
        // must equal n + 1/2 and the cavities sit in vacuum
        let p = fig4()
            .with(|s| {
                s.cav_x.drive = Drive::Power(0.0);
                s.cav_y.drive = Drive::Power(0.0);
            })
            .unwrap();
        let z = GravityCoefficients::zero(Classical, p.fingerprint());
        let d = build_dynamics(&p, &z).unwrap();
        let sol = lyapunov_steady_state(&d).unwrap();
        assert!(sol.residual_rel <= LYAPUNOV_RESIDUAL_BOUND);
        for i in 0..2 {
            let n = thermal_occupation(&p.constants, d.omega_mech[i], p.temperature);
            assert_relative_eq!(sol.sigma[(2 * i, 2 * i)], n + 0.5, max_relative = 1e-9);
            assert_relative_eq!(
                sol.sigma[(2 * i + 1, 2 * i + 1)],
                n + 0.5,
                max_relative = 1e-9
            );
            assert_relative_eq!(sol.sigma[(4 + 2 * i, 4 + 2 * i)], 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn optical_block_of_block_diagonal_state_is_vacuum() {
        let p = fig4()
            .with(|s| {
                s.cav_x.drive = Drive::Power(0.0);
                s.cav_y.drive = Drive::Power(0.0);
            })
            .unwrap();
        let z = GravityCoefficients::zero(Classical, p.fingerprint());
        let sol = lyapunov_steady_state(&build_dynamics(&p, &z).unwrap()).unwrap();
        let ob = optical_block(&sol.sigma);
        assert_relative_eq!((ob - Mat4::identity() * 0.5).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(ob, ob.transpose());
    }

    #[test]
    fn sigma_tot_homogeneity_and_support() {
        let mut m = Mat4::identity() * 0.5;
        m[(0, 2)] = 1e-3;
        m[(2, 0)] = 1e-3;
        m[(1, 3)] = -2e-3;
        m[(3, 1)] = -2e-3;
        let s1 = sigma_tot(&m);
        assert_relative_eq!(s1, 3e-3, max_relative = 1e-15);
        let mut m2 = m;
        for i in 0..2 {
            for j in 2..4 {
                m2[(i, j)] *= 2.0;
                m2[(j, i)] *= 2.0;
            }
        }
        assert_relative_eq!(sigma_tot(&m2), 2.0 * s1, max_relative = 1e-15);
        // intra-mode off-diagonals are excluded from sigma_tot
        let mut m3 = m;
        m3[(0, 1)] = 7.0;
        m3[(1, 0)] = 7.0;
        assert_eq!(sigma_tot(&m3), s1);
        assert!(sigma_offdiag_total(&m3) > sigma_offdiag_total(&m));
    }

    #[test]
    fn discord_zero_for_product_states() {
        let m = Mat4::identity() * 0.5;
        assert_eq!(gaussian_discord(&m).unwrap(), 0.0);
        let mut th = Mat4::identity() * 0.5;
        th[(0, 0)] = 2.5;
        th[(1, 1)] = 2.5;
        assert_eq!(gaussian_discord(&th).unwrap(), 0.0);
    }

    /// Two-mode squeezed covariance in vacuum-1/2 units.
    fn tmsv(r: f64) -> Mat4 {
        let ch = (2.0 * r).cosh() / 2.0;
        let sh = (2.0 * r).sinh() / 2.0;
        let mut m = Mat4::zeros();
        m[(0, 0)] = ch;
        m[(1, 1)] = ch;
        m[(2, 2)] = ch;
        m[(3, 3)] = ch;
        m[(0, 2)] = sh;
        m[(2, 0)] = sh;
        m[(1, 3)] = -sh;
        m[(3, 1)] = -sh;
        m
    }

    #[test]
    fn discord_of_two_mode_squeezed_family() {
        // frozen independent values: for these pure states the discord
        // equals the entropy of entanglement
        assert_eq!(gaussian_discord(&tmsv(0.0)).unwrap(), 0.0);
        for (r, expect) in [
            (0.25, 0.24140753076275856),
            (0.5, 0.6594529591680367),
            (1.0, 1.6198220928977023),
        ] {
            let got = gaussian_discord(&tmsv(r)).unwrap();
            assert_relative_eq!(got, expect, max_relative = 5e-6);
            // symmetric state: both measurement orderings agree
            let other = gaussian_discord_on(&tmsv(r), MeasuredMode::First).unwrap();
            assert_relative_eq!(got, other, max_relative = 1e-9);
        }
    }

    #[test]
    fn unphysical_covariance_is_rejected() {
        let m = Mat4::identity() * 0.3; // below vacuum
        match gaussian_discord(&m) {
            Err(CorrelationsError::Unphysical(nu)) => assert!(nu < 0.5),
            other => panic!("expected Unphysical, got {other:?}"),
        }
    }

    #[test]
    fn symplectic_spectrum_of_squeezed_state() {
        let m = tmsv(0.7);
        let dm = DMatrix::<f64>::from_fn(4, 4, |i, j| m[(i, j)]);
        // pure state: both symplectic eigenvalues sit at the vacuum bound
        assert_relative_eq!(min_symplectic_eigenvalue(&dm), 0.5, max_relative = 1e-9);
    }

    #[test]
    fn fig4_report_has_cross_correlations_only_for_branches() {
        let p = fig4();
        let q = CovarianceReport::compute(&p, QuantumAlpha).unwrap();
        let c = CovarianceReport::compute(&p, Classical).unwrap();
        assert!(q.stable && c.stable);
        assert!(q.residual_rel <= LYAPUNOV_RESIDUAL_BOUND);
        assert!(c.residual_rel <= LYAPUNOV_RESIDUAL_BOUND);
        assert!(q.sigma_tot > 0.0);
        assert!(c.sigma_tot <= 1e-12);
        assert!(c.discord_xy <= 1e-12);
        assert!(q.nu_min >= 0.5 - 1e-9);
        assert!(c.nu_min >= 0.5 - 1e-9);
        // X_x–X_y entry is populated by the cross coupling
        assert!(q.sigma_optical[(0, 2)].abs() > 0.0);
    }

    #[test]
    fn branch_sign_invariance_of_optical_measures() {
        let p = fig4();
        let a = CovarianceReport::compute(&p, QuantumAlpha).unwrap();
        let b = CovarianceReport::compute(&p, QuantumBeta).unwrap();
        assert_relative_eq!(a.sigma_tot, b.sigma_tot, max_relative = 1e-9);
        let scale = a.discord_xy.abs().max(1e-300);
        assert!((a.discord_xy - b.discord_xy).abs() / scale < 1e-6);
    }

    #[test]
    fn sweep_shapes_on_fig4() {
        let p = fig4();
        let sw = sweep_c1(&p, QuantumAlpha, (0.0, 5e4), 21).unwrap();
        assert!(sw.stable.iter().all(|&s| s));
        assert!(sw.control.windows(2).all(|w| w[0] < w[1]));
        // zero-coupling endpoint
        assert!(sw.sigma_tot[0].abs() <= 1e-12);
        assert!(sw.discord_xy[0].abs() <= 1e-12);
        // monotone growth past the zero point
        for k in 1..sw.control.len() - 1 {
            assert!(sw.sigma_tot[k + 1] > sw.sigma_tot[k]);
            assert!(sw.discord_xy[k + 1] > sw.discord_xy[k]);
        }
        // classical sweep: no discord anywhere
        let sc = sweep_c1(&p, Classical, (0.0, 5e4), 21).unwrap();
        assert!(sc.discord_xy.iter().all(|&d| d.abs() <= 1e-12));
        assert!(sc.sigma_tot.iter().all(|&s| s.abs() <= 1e-12));
    }

    #[test]
    fn sweep_range_validation() {
        let p = fig4();
        assert!(matches!(
            sweep_c1(&p, QuantumAlpha, (1.0, 1.0), 10),
            Err(CorrelationsError::BadSweep(_))
        ));
        assert!(matches!(
            sweep_c1(&p, QuantumAlpha, (-1.0, 1.0), 10),
            Err(CorrelationsError::BadSweep(_))
        ));
        // geometry with c1_x <= 0 cannot realize a positive control
        let flat = preset("fig3").unwrap().validate().unwrap();
        assert!(matches!(
            sweep_c1(&flat, QuantumAlpha, (0.0, 1.0), 4),
            Err(CorrelationsError::BadSweep(_))
        ));
    }
}
