//! Single-mode exciton/photon dynamics in wavevector space.
//!
//! Natural units `omega = c = hbar = 1` throughout: wavenumbers are measured in
//! `omega/c`, times in `1/omega`. The detuning of mode `k` is `(1 - k) / 2`.

use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `(2 pi)^-3`, the amplitude of the delta-function source in every mode.
pub const SOURCE_NORM: f64 = 1.0 / (8.0 * PI * PI * PI);

/// Above this coupling the weak-coupling reduction of the real-space kernels
/// is no longer trustworthy.
pub const WEAK_COUPLING_LIMIT: f64 = 0.1;

/// Reduced Planck constant in erg s, for [`coupling_from_physical`].
pub const HBAR_CGS: f64 = 1.054_571_817e-27;

/// Coupling strength and evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Dimensionless coupling `U`.
    pub coupling: f64,
    /// Evolution time `t` in units of `1/omega`.
    pub time: f64,
}

impl SimParams {
    pub fn new(coupling: f64, time: f64) -> Result<Self> {
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return domain(format!("coupling must be finite and >= 0, got {coupling}"));
        }
        if !(time >= 0.0) || !time.is_finite() {
            return domain(format!("time must be finite and >= 0, got {time}"));
        }
        Ok(Self { coupling, time })
    }

    /// Parameters from the scaled time `T = t U^2`.
    pub fn from_scaled_time(coupling: f64, scaled_time: f64) -> Result<Self> {
        if !(coupling > 0.0) {
            return domain(format!(
                "scaled time needs a positive coupling, got {coupling}"
            ));
        }
        Self::new(coupling, scaled_time / (coupling * coupling))
    }

    /// `T = t U^2`, the time in units of the redistribution rate.
    pub fn scaled_time(&self) -> f64 {
        self.time * self.coupling * self.coupling
    }

    /// `T U = t U^3`.
    pub fn tu_scale(&self) -> f64 {
        self.scaled_time() * self.coupling
    }

    /// False when `U` exceeds [`WEAK_COUPLING_LIMIT`].
    pub fn weak_coupling(&self) -> bool {
        self.coupling <= WEAK_COUPLING_LIMIT
    }
}

/// Exciton and photon amplitudes of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub k: f64,
    pub alpha: f64,
    pub psi: C64,
    pub phi: C64,
}

impl ModeState {
    pub fn norm_sqr(&self) -> f64 {
        self.psi.norm_sqr() + self.phi.norm_sqr()
    }
}

/// Complex wavenumbers where the Rabi frequency vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPair {
    pub k_plus: C64,
    pub k_minus: C64,
    /// False when `U sin(alpha) > 1`; the pair is then real and outside the
    /// model.
    pub within_validity: bool,
}

fn check_k(k: f64) -> Result<()> {
    if !(k >= 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be finite and >= 0, got {k}"));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=PI).contains(&alpha) {
        return domain(format!("alpha must lie in [0, pi], got {alpha}"));
    }
    Ok(())
}

/// `Omega^2(k)`; also valid for complex `k` under analytic continuation.
pub fn rabi_frequency_sqr(k: C64, alpha: f64, coupling: f64) -> C64 {
    let v2 = (coupling * alpha.sin()).powi(2);
    let det = (1.0 - k) * 0.5;
    det * det + k * v2
}

/// Rabi frequency `sqrt(((1-k)/2)^2 + k U^2 sin^2 alpha)`.
pub fn rabi_frequency(k: f64, alpha: f64, params: &SimParams) -> Result<f64> {
    check_k(k)?;
    let s = params.coupling * alpha.sin();
    let det = 0.5 * (1.0 - k);
    Ok((det * det + k * s * s).sqrt())
}

/// `sin(x t) / x`, continuous at `x = 0`.
fn sin_over(x: f64, t: f64) -> f64 {
    let xt = x * t;
    if xt.abs() < 1e-4 {
        t * (1.0 - xt * xt / 6.0)
    } else {
        (xt).sin() / x
    }
}

/// Exact amplitudes of mode `(k, alpha)` at time `params.time` after a
/// point excitation at the origin.
pub fn mode_amplitudes(k: f64, alpha: f64, params: &SimParams) -> Result<ModeState> {
    check_k(k)?;
    if !(params.time >= 0.0) {
        return domain(format!("time must be >= 0, got {}", params.time));
    }
    let t = params.time;
    let omega = rabi_frequency(k, alpha, params)?;
    let det = 0.5 * (1.0 - k);
    let v = params.coupling * k.sqrt() * alpha.sin();
    let carrier = C64::from_polar(SOURCE_NORM, det * t);
    let sinc = sin_over(omega, t);
    let psi = -carrier * C64::new(det * sinc, (omega * t).cos());
    let phi = -carrier * (v * sinc);
    Ok(ModeState { k, alpha, psi, phi })
}

/// Branch points `k = 1 - 2w +- 2i sqrt(w (1 - w))` with `w = U^2 sin^2 alpha`.
///
/// Diagnostic only: the real-space kernels already have the contour around
/// these points folded in.
pub fn branch_points(alpha: f64, params: &SimParams) -> Result<BranchPair> {
    check_alpha(alpha)?;
    let us = params.coupling * alpha.sin();
    let w = us * us;
    let centre = 1.0 - 2.0 * w;
    if w <= 1.0 {
        let im = 2.0 * us * (1.0 - w).sqrt();
        Ok(BranchPair {
            k_plus: C64::new(centre, im),
            k_minus: C64::new(centre, -im),
            within_validity: true,
        })
    } else {
        let re = 2.0 * us * (w - 1.0).sqrt();
        Ok(BranchPair {
            k_plus: C64::new(centre - re, 0.0),
            k_minus: C64::new(centre + re, 0.0),
            within_validity: false,
        })
    }
}

/// Stationary photon amplitude at frequency offset `eps` for mode `(k, alpha)`.
pub fn steady_amplitude(eps: f64, k: f64, alpha: f64, params: &SimParams) -> Result<C64> {
    check_k(k)?;
    let us = params.coupling * alpha.sin();
    let w = us * us;
    let denom = -eps * eps + k * eps - eps + k * w;
    let scale = eps * eps + (k * eps).abs() + eps.abs() + k * w;
    if denom.abs() <= 4.0 * f64::EPSILON * scale {
        let kappa = if eps + w != 0.0 {
            eps * (eps + 1.0) / (eps + w)
        } else {
            f64::NAN
        };
        return Err(Error::Singularity { kappa });
    }
    Ok(C64::new(-k.sqrt() * us * SOURCE_NORM / denom, 0.0))
}

/// Dimensionless coupling from Gaussian-unit inputs.
///
/// `d` in statC cm, `n_density` in cm^-3, `omega` in rad/s; returns `U` with
/// `U^2 = 4 pi d^2 n / (hbar omega)`.
pub fn coupling_from_physical(d: f64, n_density: f64, omega: f64) -> Result<f64> {
    for (name, v) in [("dipole", d), ("density", n_density), ("omega", omega)] {
        if !(v > 0.0) || !v.is_finite() {
            return domain(format!("{name} must be finite and > 0, got {v}"));
        }
    }
    Ok((4.0 * PI * n_density / (HBAR_CGS * omega)).sqrt() * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: f64, t: f64) -> SimParams {
        SimParams::new(u, t).unwrap()
    }

    #[test]
    fn rabi_on_resonance() {
        let w = rabi_frequency(1.0, PI / 2.0, &p(0.1, 0.0)).unwrap();
        assert!((w - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rabi_decoupled_mode() {
        for &k in &[0.0, 0.4, 2.5] {
            let w = rabi_frequency(k, 0.0, &p(0.07, 0.0)).unwrap();
            assert!((w - (1.0 - k).abs() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rabi_reference_value() {
        // ((0.1)/2)^2 + 0.9 * 0.0025 * 0.5 = 0.0025 + 0.001125
        let w = rabi_frequency(0.9, PI / 4.0, &p(0.05, 0.0)).unwrap();
        assert!((w - 0.003_625_f64.sqrt()).abs() < 1e-15);
        assert!((w - 0.060_208_0).abs() < 1e-7);
    }

    #[test]
    fn negative_k_rejected() {
        assert!(rabi_frequency(-0.1, 0.3, &p(0.05, 1.0)).is_err());
        assert!(mode_amplitudes(-1.0, 0.3, &p(0.05, 1.0)).is_err());
    }

    #[test]
    fn initial_condition() {
        let m = mode_amplitudes(0.7, 1.0, &p(0.05, 0.0)).unwrap();
        assert!((m.psi - C64::new(0.0, -SOURCE_NORM)).norm() < 1e-18);
        assert_eq!(m.phi, C64::new(0.0, 0.0));
    }

    #[test]
    fn resonant_mode() {
        let (u, t, a) = (0.05, 37.0, 1.1);
        let m = mode_amplitudes(1.0, a, &p(u, t)).unwrap();
        let x = u * t * a.sin();
        assert!((m.psi - C64::new(0.0, -x.cos() * SOURCE_NORM)).norm() < 1e-17);
        assert!((m.phi.norm() - x.sin().abs() * SOURCE_NORM).abs() < 1e-17);
    }

    #[test]
    fn decoupled_mode_keeps_modulus() {
        for &t in &[0.0, 1.0, 13.0, 1e4] {
            let m = mode_amplitudes(1.3, 0.0, &p(0.05, t)).unwrap();
            assert!((m.psi.norm() - SOURCE_NORM).abs() < 1e-16);
            assert_eq!(m.phi.norm(), 0.0);
        }
    }

    #[test]
    fn degenerate_branch_points() {
        let b = branch_points(0.0, &p(0.05, 0.0)).unwrap();
        assert_eq!(b.k_plus, C64::new(1.0, 0.0));
        assert_eq!(b.k_minus, C64::new(1.0, 0.0));
        let b = branch_points(1.0, &p(0.0, 0.0)).unwrap();
        assert_eq!(b.k_plus, C64::new(1.0, 0.0));
    }

    #[test]
    fn branch_points_are_zeros() {
        let b = branch_points(PI / 2.0, &p(0.05, 0.0)).unwrap();
        assert!(b.within_validity);
        assert_eq!(b.k_plus, b.k_minus.conj());
        for k in [b.k_plus, b.k_minus] {
            assert!(rabi_frequency_sqr(k, PI / 2.0, 0.05).norm() < 1e-12);
        }
    }

    #[test]
    fn strong_coupling_branch_points_flagged() {
        let b = branch_points(PI / 2.0, &p(1.5, 0.0)).unwrap();
        assert!(!b.within_validity);
        assert_eq!(b.k_plus.im, 0.0);
        for k in [b.k_plus, b.k_minus] {
            assert!(rabi_frequency_sqr(k, PI / 2.0, 1.5).norm() < 1e-12);
        }
    }

    #[test]
    fn steady_amplitude_limits() {
        let pr = p(0.05, 0.0);
        assert_eq!(steady_amplitude(0.05, 1.2, 0.0, &pr).unwrap().norm(), 0.0);
        let a1 = steady_amplitude(0.3, 0.8, 1.0, &p(1e-4, 0.0)).unwrap();
        let a2 = steady_amplitude(0.3, 0.8, 1.0, &p(2e-4, 0.0)).unwrap();
        assert!((a2.re / a1.re - 2.0).abs() < 1e-6);
    }

    #[test]
    fn steady_amplitude_reference() {
        // exactly representable pole: eps = 0.5, U = 0.5, k = 1
        match steady_amplitude(0.5, 1.0, PI / 2.0, &p(0.5, 0.0)) {
            Err(Error::Singularity { kappa }) => assert!((kappa - 1.0).abs() < 1e-12),
            other => panic!("expected singularity, got {other:?}"),
        }
        let pr = p(0.05, 0.0);
        let v = steady_amplitude(0.1, 1.0, PI / 2.0, &pr).unwrap();
        let expect = -0.05 / (8.0 * PI.powi(3) * (-0.01 + 0.1 - 0.1 + 0.0025));
        assert!((v.re - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn physical_coupling_scaling() {
        let (d, n, w) = (2.5e-18, 1e12, 2.0 * PI * 1e10);
        let u = coupling_from_physical(d, n, w).unwrap();
        assert!((coupling_from_physical(d, 4.0 * n, w).unwrap() / u - 2.0).abs() < 1e-14);
        assert!((coupling_from_physical(2.0 * d, n, w).unwrap() / u - 2.0).abs() < 1e-14);
        assert!((coupling_from_physical(d, 2.0 * n, w).unwrap() / u - 2f64.sqrt()).abs() < 1e-14);
        let rt = u * u * HBAR_CGS * w / (4.0 * PI * d * d * n);
        assert!((rt - 1.0).abs() < 1e-14);
        assert!(coupling_from_physical(0.0, n, w).is_err());
        assert!(coupling_from_physical(d, -1.0, w).is_err());
    }

    #[test]
    fn scaled_time_roundtrip() {
        let s = SimParams::from_scaled_time(0.05, 0.01).unwrap();
        assert!((s.time - 4.0).abs() < 1e-12);
        assert!((s.scaled_time() - 0.01).abs() < 1e-16);
        assert!(SimParams::new(0.05, -1.0).is_err());
        assert!(!p(0.2, 1.0).weak_coupling());
    }
}
