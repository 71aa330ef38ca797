//! Displacement noise spectrum of the probe's x motion.
//!
//! Two routes to the same quantity:
//!
//! * [`dns_closed_form`] evaluates the analytic expression obtained by
//!   eliminating the cavity fields and the y motion from the coupled
//!   frequency-domain equations;
//! * [`dns_matrix_oracle`] solves the full 8x8 resolvent system at each
//!   frequency and assembles the spectrum from the input-noise weights.
//!
//! Both carry the exact coth thermal weight. The spectrum is two-sided and
//! symmetrized; exported files state the single-sided conversion factor.

use crate::dynamics;
use crate::dynamics::{build_dynamics, stability, DynamicsError};
use crate::gravity::{farfield_coefficients, GravityCoefficients, GravityError};
use crate::model::{Axis, Scenario, ValidatedParams};
use nalgebra::{Complex, SMatrix, SVector};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("singular resolvent at omega = {0:e} rad/s")]
    SingularResolvent(f64),
}

/// Sampled displacement PSD curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Angular frequencies, rad/s, strictly increasing.
    pub frequencies: Vec<f64>,
    /// Two-sided displacement PSD, m^2 s.
    pub values: Vec<f64>,
    pub scenario: Scenario,
    /// Fingerprint of the parameter set the curve was computed from.
    pub fingerprint: String,
}

/// Frequency grid request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>, SpectraError> {
        if self.n_points < 2 {
            return Err(SpectraError::BadGrid("need at least 2 points".into()));
        }
        if !self.omega_min.is_finite() || !self.omega_max.is_finite() {
            return Err(SpectraError::BadGrid("bounds must be finite".into()));
        }
        if self.omega_min >= self.omega_max {
            return Err(SpectraError::BadGrid(
                "omega_min must be below omega_max".into(),
            ));
        }
        let n = self.n_points;
        let pts = match self.spacing {
            Spacing::Linear => {
                if self.omega_min < 0.0 {
                    return Err(SpectraError::BadGrid("negative frequencies".into()));
                }
                (0..n)
                    .map(|k| {
                        let t = k as f64 / (n - 1) as f64;
                        self.omega_min + t * (self.omega_max - self.omega_min)
                    })
                    .collect::<Vec<_>>()
            }
            Spacing::Log => {
                if self.omega_min <= 0.0 {
                    return Err(SpectraError::BadGrid(
                        "log spacing needs omega_min > 0".into(),
                    ));
                }
                let (a, b) = (self.omega_min.ln(), self.omega_max.ln());
                (0..n)
                    .map(|k| {
                        let t = k as f64 / (n - 1) as f64;
                        (a + t * (b - a)).exp()
                    })
                    .collect::<Vec<_>>()
            }
        };
        Ok(pts)
    }
}

/// w * coth(hbar w / 2 kB T), with the analytic w -> 0 limit 2 kB T / hbar.
fn thermal_weight(hbar: f64, k_b: f64, temperature: f64, w: f64) -> f64 {
    let x = hbar * w / (2.0 * k_b * temperature);
    if x == 0.0 {
        2.0 * k_b * temperature / hbar
    } else {
        w / x.tanh()
    }
}

/// Precomputed per-scenario ingredients of the closed-form spectrum.
#[derive(Debug, Clone)]
pub struct DnsModel {
    m2: f64,
    hbar: f64,
    k_b: f64,
    temperature: f64,
    c2: f64,
    response: [dynamics::EffectiveResponse; 2],
    /// per-axis (gamma, kappa, delta, chi^2 |a|^2)
    noise: [(f64, f64, f64, f64); 2],
    params_fingerprint: String,
    scenario: Scenario,
}

impl DnsModel {
    /// Far-field coefficients and mean fields are computed internally.
    pub fn new(params: &ValidatedParams, scenario: Scenario) -> Result<Self, SpectraError> {
        let coeffs = scenario_coefficients(params, scenario)?;
        Self::with_coefficients(params, &coeffs)
    }

    pub fn with_coefficients(
        params: &ValidatedParams,
        coeffs: &GravityCoefficients,
    ) -> Result<Self, SpectraError> {
        let mut response = Vec::with_capacity(2);
        let mut noise = Vec::with_capacity(2);
        for axis in Axis::BOTH {
            let cav = params.cav(axis);
            let mf = dynamics::mean_field(cav, &params.constants)?;
            response.push(dynamics::effective_response(params, &mf, coeffs, axis)?);
            let chi = cav.chi();
            noise.push((
                params.mech(axis).gamma,
                cav.kappa,
                mf.delta,
                chi * chi * mf.n_photon,
            ));
        }
        Ok(Self {
            m2: params.m2,
            hbar: params.constants.hbar,
            k_b: params.constants.k_b,
            temperature: params.temperature,
            c2: coeffs.c2,
            response: [response[0], response[1]],
            noise: [noise[0], noise[1]],
            params_fingerprint: params.fingerprint_hex(),
            scenario: coeffs.scenario,
        })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn response(&self, axis: Axis) -> &dynamics::EffectiveResponse {
        &self.response[axis.index()]
    }

    /// Force-noise PSD driving one axis: thermal coth term plus the cavity
    /// backaction term
    ///   S_i(w) = hbar m2 gamma_i w coth(hbar w/2 kB T)
    ///          + 2 hbar^2 chi_i^2 kappa_i |a_i|^2 (k^2+D^2+w^2) / P_i(w).
    fn force_noise(&self, axis: Axis, w: f64) -> f64 {
        let (gamma, kappa, delta, chi2n) = self.noise[axis.index()];
        let thermal =
            self.hbar * self.m2 * gamma * thermal_weight(self.hbar, self.k_b, self.temperature, w);
        let s = kappa * kappa + delta * delta + w * w;
        let p = s * s - 4.0 * delta * delta * w * w;
        thermal + 2.0 * self.hbar * self.hbar * chi2n * kappa * s / p
    }

    /// Closed-form two-sided displacement PSD of the x motion, m^2 s:
    ///
    ///   S(w) = [m2^2 g_y S_x + C2^2 S_y]
    ///        / [m2^4 g_x g_y - 2 m2^2 C2^2 f + C2^4],
    ///
    /// with g_i = (w_eff_i^2 - w^2)^2 + gamma_eff_i^2 w^2 and
    /// f = (w_eff_x^2 - w^2)(w_eff_y^2 - w^2) - gamma_eff_x gamma_eff_y w^2.
    /// Terms are kept grouped; expanding the denominator invites
    /// cancellation between the m2^4 and C2^2 pieces.
    pub fn closed_form(&self, w: f64) -> f64 {
        let rx = &self.response[0];
        let ry = &self.response[1];
        let dx = rx.omega_eff_sq(w) - w * w;
        let dy = ry.omega_eff_sq(w) - w * w;
        let gx = dx * dx + rx.gamma_eff(w).powi(2) * w * w;
        let gy = dy * dy + ry.gamma_eff(w).powi(2) * w * w;
        let f = dx * dy - rx.gamma_eff(w) * ry.gamma_eff(w) * w * w;
        let sx = self.force_noise(Axis::X, w);
        let sy = self.force_noise(Axis::Y, w);
        let m2sq = self.m2 * self.m2;
        let c2sq = self.c2 * self.c2;
        let num = m2sq * gy * sx + c2sq * sy;
        let den = m2sq * m2sq * gx * gy - 2.0 * m2sq * c2sq * f + c2sq * c2sq;
        num / den
    }
}

fn scenario_coefficients(
    params: &ValidatedParams,
    scenario: Scenario,
) -> Result<GravityCoefficients, GravityError> {
    farfield_coefficients(params, scenario)
}

/// Closed-form DNS at a single frequency.
pub fn dns_closed_form(
    omega: f64,
    params: &ValidatedParams,
    scenario: Scenario,
) -> Result<f64, SpectraError> {
    Ok(DnsModel::new(params, scenario)?.closed_form(omega))
}

/// Full-matrix frequency-domain evaluation of the same PSD.
///
/// Solves (-i w I - A) v = n(w) for the eight-dimensional system and sums
/// the input-noise weights: thermal gamma_i (w/omega_i) coth(...) on the
/// momentum rows, vacuum kappa_i on each cavity quadrature. The result is
/// rescaled to m^2 s by the x quadrature length.
pub fn dns_matrix_oracle(
    omega: f64,
    params: &ValidatedParams,
    scenario: Scenario,
) -> Result<f64, SpectraError> {
    let coeffs = scenario_coefficients(params, scenario)?;
    let dyn_ = build_dynamics(params, &coeffs)?;
    let resolvent = MatrixOracle::new(params, dyn_);
    resolvent.evaluate(omega)
}

/// Reusable resolvent evaluator (one LU per frequency).
pub struct MatrixOracle {
    dyn_: dynamics::LinearDynamics,
    hbar: f64,
    k_b: f64,
    temperature: f64,
}

impl MatrixOracle {
    pub fn new(params: &ValidatedParams, dyn_: dynamics::LinearDynamics) -> Self {
        Self {
            dyn_,
            hbar: params.constants.hbar,
            k_b: params.constants.k_b,
            temperature: params.temperature,
        }
    }

    pub fn evaluate(&self, omega: f64) -> Result<f64, SpectraError> {
        type CMat = SMatrix<Complex<f64>, 8, 8>;
        type CVec = SVector<Complex<f64>, 8>;
        // row 0 of (-i w I - A)^-1, via the transposed system
        let mut m = CMat::zeros();
        for i in 0..8 {
            for j in 0..8 {
                m[(i, j)] = Complex::new(-self.dyn_.drift[(j, i)], 0.0);
            }
            m[(i, i)] -= Complex::new(0.0, omega);
        }
        let mut e0 = CVec::zeros();
        e0[0] = Complex::new(1.0, 0.0);
        let row = m
            .lu()
            .solve(&e0)
            .ok_or(SpectraError::SingularResolvent(omega))?;

        let mut s = 0.0;
        for i in 0..2 {
            let thermal = self.dyn_.gamma_mech[i]
                * thermal_weight(self.hbar, self.k_b, self.temperature, omega)
                / self.dyn_.omega_mech[i];
            s += thermal * row[2 * i + 1].norm_sqr();
            s += self.dyn_.kappa[i] * (row[4 + 2 * i].norm_sqr() + row[5 + 2 * i].norm_sqr());
        }
        Ok(self.dyn_.quad_scale[0] * self.dyn_.quad_scale[0] * s)
    }
}

/// Sample the closed form over a grid. Points are independent and are
/// evaluated in parallel with ordered assembly, so the output is identical
/// for any thread count.
pub fn scan(
    params: &ValidatedParams,
    scenario: Scenario,
    grid: &GridSpec,
) -> Result<Spectrum, SpectraError> {
    let model = DnsModel::new(params, scenario)?;
    let frequencies = grid.points()?;
    let values: Vec<f64> = frequencies
        .par_iter()
        .map(|&w| model.closed_form(w))
        .collect();
    Ok(Spectrum {
        frequencies,
        values,
        scenario,
        fingerprint: model.params_fingerprint.clone(),
    })
}

/// One detected spectral peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Peak center, rad/s.
    pub center: f64,
    /// PSD value at the peak, m^2 s.
    pub height: f64,
    /// Width at half prominence, rad/s.
    pub width: f64,
    /// Topographic prominence, m^2 s.
    pub prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakSet {
    pub peaks: Vec<Peak>,
}

/// Local maxima whose topographic prominence exceeds
/// `prominence_rel * max(spectrum)`. Width is measured at
/// height - prominence/2 by linear interpolation.
pub fn find_peaks(spectrum: &Spectrum, prominence_rel: f64) -> PeakSet {
    let v = &spectrum.values;
    let w = &spectrum.frequencies;
    let n = v.len();
    if n < 3 {
        return PeakSet::default();
    }
    let global_max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = prominence_rel * global_max;

    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if !(v[i] > v[i - 1] && v[i] > v[i + 1]) {
            continue;
        }
        // prominence: lowest saddle separating the peak from higher terrain,
        // taken on the worse of the two sides; window edges act as barriers
        let mut left_min = v[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            left_min = left_min.min(v[j]);
            if v[j] > v[i] {
                break;
            }
        }
        let mut right_min = v[i];
        let mut j = i;
        while j + 1 < n {
            j += 1;
            right_min = right_min.min(v[j]);
            if v[j] > v[i] {
                break;
            }
        }
        let prominence = v[i] - left_min.max(right_min);
        if prominence < threshold {
            continue;
        }

        let ref_height = v[i] - 0.5 * prominence;
        let left_x = cross_left(w, v, i, ref_height);
        let right_x = cross_right(w, v, i, ref_height);
        peaks.push(Peak {
            center: w[i],
            height: v[i],
            width: right_x - left_x,
            prominence,
        });
    }
    PeakSet { peaks }
}

fn cross_left(w: &[f64], v: &[f64], i: usize, h: f64) -> f64 {
    let mut j = i;
    while j > 0 && v[j - 1] > h {
        j -= 1;
    }
    if j == 0 {
        return w[0];
    }
    let t = (h - v[j - 1]) / (v[j] - v[j - 1]);
    w[j - 1] + t * (w[j] - w[j - 1])
}

fn cross_right(w: &[f64], v: &[f64], i: usize, h: f64) -> f64 {
    let n = v.len();
    let mut j = i;
    while j + 1 < n && v[j + 1] > h {
        j += 1;
    }
    if j + 1 == n {
        return w[n - 1];
    }
    let t = (v[j] - h) / (v[j] - v[j + 1]);
    w[j] + t * (w[j + 1] - w[j])
}

/// Grid frequency closest to the self-consistent effective resonance of one
/// axis, i.e. the w minimizing |omega_eff^2(w) - w^2|.
pub fn effective_resonance_on_grid(
    model: &DnsModel,
    axis: Axis,
    frequencies: &[f64],
) -> Option<(usize, f64)> {
    let r = model.response(axis);
    frequencies
        .iter()
        .enumerate()
        .map(|(i, &w)| (i, (r.omega_eff_sq(w) - w * w).abs()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(i, _)| (i, frequencies[i]))
}

/// Check that a stable steady state exists before interpreting a spectrum
/// physically.
pub fn require_stable(
    params: &ValidatedParams,
    scenario: Scenario,
) -> Result<dynamics::StabilityReport, SpectraError> {
    let coeffs = scenario_coefficients(params, scenario)?;
    let dyn_ = build_dynamics(params, &coeffs)?;
    let report = stability(&dyn_)?;
    if !report.stable {
        return Err(SpectraError::Dynamics(DynamicsError::Unstable(
            report.max_real_part,
        )));
    }
    Ok(report)
}
