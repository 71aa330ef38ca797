//! Simulation toolkit for a gravitationally coupled, two-axis levitated
//! optomechanical probe.
//!
//! A source mass sits next to a harmonically trapped probe whose x and y
//! motions are each read out by a driven cavity. The gravitational force on
//! the probe is expanded to first order in the probe fluctuations, which
//! yields a constant term, a spring-like correction and an x–y cross
//! coupling. Two force models are supported: a branch-resolved one in which
//! the source acts from one of two displaced positions (`QuantumAlpha`,
//! `QuantumBeta`), and an averaged one (`Classical`) in which the cross
//! coupling cancels exactly.
//!
//! The crate computes, for either force model,
//!
//! * the closed-form displacement noise spectrum of the probe's x motion and
//!   an independent full-matrix frequency-domain evaluation of the same
//!   quantity ([`spectra`]),
//! * the steady-state covariance matrix of the linearized eight-dimensional
//!   fluctuation system, the all-optical sub-block, its inter-mode norm and
//!   the Gaussian discord of the two cavity fields ([`correlations`]).
//!
//! All angular frequencies are in rad/s, lengths in m, masses in kg and
//! temperatures in K. Quadratures use the convention in which the vacuum
//! variance of every mode is 1/2.

pub mod config;
pub mod constants;
pub mod correlations;
pub mod dynamics;
pub mod gravity;
pub mod model;
pub mod spectra;

pub use config::{load_config_str, preset, resolve, ConfigError};
pub use constants::PhysicalConstants;
pub use correlations::{
    gaussian_discord, lyapunov_steady_state, optical_block, sigma_tot, sweep_c1, CovarianceReport,
    SweepResult,
};
pub use dynamics::{build_dynamics, mean_field, stability, LinearDynamics, MeanField};
pub use gravity::{
    classical_average, exact_coefficients, farfield_coefficients, steady_displacement,
    trap_recenter, GravityCoefficients,
};
pub use model::{
    Axis, CavityAxis, Drive, Geometry, MechanicalAxis, Scenario, SystemParameters, ValidatedParams,
};
pub use spectra::{dns_closed_form, dns_matrix_oracle, find_peaks, scan, GridSpec, Spectrum};
