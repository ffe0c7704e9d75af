//! Excitation redistribution in an infinite polarized two-level medium under
//! the long-range, photon-mediated dipole-dipole interaction, and the
//! emission spectrum of a finite cloud.
//!
//! Natural units `omega = c = hbar = 1` are used throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dynamics;
pub mod error;
pub mod kspace;
pub mod output;
pub mod quadrature;
pub mod specfun;
pub mod spectrum;

pub use config::{Command, OutputFormat, RunConfig};
pub use dynamics::{
    angular_profile, asymptotic_amplitude, excited_amplitude, field_map, photon_amplitude,
    radial_profile, short_time_amplitude, short_time_integrand_check, Axis, FieldMap, FieldPoint,
    GridSpec, Model,
};
pub use error::{Error, Result};
pub use kspace::{
    branch_points, coupling_from_physical, mode_amplitudes, rabi_frequency, BranchPair, ModeState,
    SimParams,
};
pub use num_complex::Complex64;
pub use output::{render, run, RunOutcome};
pub use quadrature::{integrate_hemisphere, Estimate, QuadratureSpec};
pub use specfun::{bessel_j0, bessel_j1, BesselEval};
pub use spectrum::{averaged_amplitude, density_ft, spectral_intensity, DensityProfile, ProfileShape};
