//! Real-space exciton and photon amplitudes produced by the long-range
//! interaction, for a point excitation at the origin of an infinite medium.
//!
//! Coordinates: the polarization axis is `z`, a field point sits at distance
//! `r` and polar angle `theta` from it, so `z = r cos(theta)` and
//! `rho = r sin(theta)`. Everything is azimuth-free.
//!
//! Three evaluation routes are provided:
//!
//! * the full solid-angle integrals (light-cone restricted, Bessel kernels),
//! * the closed form valid for `t U^2 << 1` and `r << t`,
//! * the two-term Bessel asymptotics for `t U^2 >> 1`.

use crate::error::{domain, Error, Result};
use crate::kspace::SimParams;
use crate::quadrature::{integrate_hemisphere, sin2_alpha, Estimate, QuadratureSpec};
use crate::specfun::{j0, j1_ratio};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Short-time regime: `t U^2` at most this.
pub const SHORT_TIME_MAX_T: f64 = 0.1;
/// Short-time regime also needs `r` at most this fraction of `t`.
pub const SHORT_TIME_MAX_R_OVER_T: f64 = 0.1;
/// Asymptotic regime: `t U^2` at least this.
pub const ASYMPTOTIC_MIN_T: f64 = 10.0;

/// Initial-panel budget for one radial profile.
pub const RADIAL_PANEL_BUDGET: f64 = 5.0e6;

/// Below this radius the closed short-time form switches to its series.
const SHORT_TIME_SERIES_RADIUS: f64 = 0.05;

/// Observation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub r: f64,
    pub theta: f64,
}

impl FieldPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return domain(format!("r must be finite and >= 0, got {r}"));
        }
        if !(0.0..=PI).contains(&theta) {
            return domain(format!("theta must lie in [0, pi], got {theta}"));
        }
        Ok(Self { r, theta })
    }

    pub fn from_cylindrical(z: f64, rho: f64) -> Result<Self> {
        if !(rho >= 0.0) {
            return domain(format!("rho must be >= 0, got {rho}"));
        }
        let r = z.hypot(rho);
        let theta = if r == 0.0 { 0.0 } else { rho.atan2(z) };
        Self::new(r, theta)
    }

    pub fn z(&self) -> f64 {
        self.r * self.theta.cos()
    }

    pub fn rho(&self) -> f64 {
        self.r * self.theta.sin()
    }
}

/// Upper limit of `cos(Theta)` allowed by the light cone, `min(1, t/r)`.
pub fn cone_cut(point: &FieldPoint, params: &SimParams) -> f64 {
    if point.r <= params.time {
        1.0
    } else {
        params.time / point.r
    }
}

/// Oscillation rate in `cos(Theta)` of the full kernels: the plane-wave phase
/// plus the mean rate of the Bessel argument across the cone.
fn kernel_phase_rate(point: &FieldPoint, params: &SimParams, cut: f64) -> f64 {
    let (r, t, u) = (point.r, params.time, params.coupling);
    let rc = r * cut;
    let peak = if rc >= 0.5 * t { 0.25 * t * t } else { rc * (t - rc) };
    r + 2.0 * u * peak.sqrt() / cut
}

enum Kernel {
    Excited,
    Photon,
}

/// Shared integrand of the exciton (J1) and photon (J0) amplitudes.
fn full_integrand(
    kernel: &Kernel,
    point: &FieldPoint,
    params: &SimParams,
) -> impl Fn(f64, f64) -> C64 {
    let (st, ct) = point.theta.sin_cos();
    let r = point.r;
    let t = params.time;
    let u2 = params.coupling * params.coupling;
    let photon = matches!(kernel, Kernel::Photon);
    move |cos_big: f64, phi: f64| {
        let ru = r * cos_big;
        let rem = t - ru;
        if rem <= 0.0 {
            return C64::default();
        }
        let sin_big = (1.0 - cos_big * cos_big).max(0.0).sqrt();
        let s2 = sin2_alpha(ct, st, cos_big, sin_big, phi.cos());
        let w2 = u2 * s2;
        let z = 2.0 * (w2 * ru * rem).sqrt();
        let carrier = C64::from_polar(1.0, t * w2 - ru);
        if photon {
            carrier * C64::new(0.0, w2.sqrt() * j0(z))
        } else {
            carrier * (w2 * rem * j1_ratio(z))
        }
    }
}

fn full_amplitude(
    kernel: Kernel,
    point: &FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
    upper_cos: Option<f64>,
) -> Result<Estimate<C64>> {
    spec.validate()?;
    if params.time == 0.0 || params.coupling == 0.0 {
        return Ok(Estimate::zero());
    }
    let exact = cone_cut(point, params);
    let cut = upper_cos.unwrap_or(exact);
    let f = full_integrand(&kernel, point, params);
    let rate = kernel_phase_rate(point, params, exact);
    let norm = 1.0 / (2.0 * PI * PI);
    let est = integrate_hemisphere(f, cut, rate, spec).map_err(|e| scale_error(e, norm))?;
    Ok(Estimate {
        value: est.value * norm,
        error: est.error * norm,
        evaluations: est.evaluations,
    })
}

fn scale_error(e: Error, s: f64) -> Error {
    match e {
        Error::Convergence {
            best_re,
            best_im,
            achieved,
            requested,
        } => Error::Convergence {
            best_re: best_re * s,
            best_im: best_im * s,
            achieved: achieved * s,
            requested: requested * s,
        },
        other => other,
    }
}

/// Exciton amplitude `psi(r, t)` from the full light-cone integral.
pub fn excited_amplitude(
    point: &FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
) -> Result<Estimate<C64>> {
    full_amplitude(Kernel::Excited, point, params, spec, None)
}

/// Exciton amplitude with the `cos(Theta)` integration extended to
/// `upper_cos`; the causal cut is then enforced inside the integrand only.
pub fn excited_amplitude_on_domain(
    point: &FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
    upper_cos: f64,
) -> Result<Estimate<C64>> {
    if !(upper_cos > 0.0 && upper_cos <= 1.0) {
        return domain(format!("upper_cos must lie in (0, 1], got {upper_cos}"));
    }
    full_amplitude(Kernel::Excited, point, params, spec, Some(upper_cos))
}

/// Photon counterpart of [`excited_amplitude_on_domain`].
pub fn photon_amplitude_on_domain(
    point: &FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
    upper_cos: f64,
) -> Result<Estimate<C64>> {
    if !(upper_cos > 0.0 && upper_cos <= 1.0) {
        return domain(format!("upper_cos must lie in (0, 1], got {upper_cos}"));
    }
    full_amplitude(Kernel::Photon, point, params, spec, Some(upper_cos))
}

/// Photon amplitude `phi(r, t)` from the full light-cone integral.
pub fn photon_amplitude(
    point: &FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
) -> Result<Estimate<C64>> {
    full_amplitude(Kernel::Photon, point, params, spec, None)
}

/// `int_0^1 u^n exp(-i r u) du` by its power series; good for small `r`.
fn moment_series(n: u32, r: f64) -> C64 {
    let mut sum = C64::new(1.0 / (n + 1) as f64, 0.0);
    let mut pw = C64::new(1.0, 0.0);
    let step = C64::new(0.0, -r);
    for m in 1..40u32 {
        pw = pw * step / m as f64;
        let term = pw / (m + n + 1) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// Closed-form exciton amplitude for `t U^2 << 1`:
/// `(i T / 4 pi) [A(r) + B(r) cos(2 theta)]`.
pub fn short_time_amplitude(point: &FieldPoint, params: &SimParams) -> C64 {
    let big_t = params.scaled_time();
    let c = (2.0 * point.theta).cos();
    let r = point.r;
    if r < SHORT_TIME_SERIES_RADIUS {
        let i0 = moment_series(0, r);
        let i2 = moment_series(2, r);
        return -(i0 * (3.0 + c) - i2 * (1.0 + 3.0 * c)) * (big_t / (4.0 * PI));
    }
    let i = C64::i();
    let e = C64::from_polar(1.0, -r);
    let r2 = r * r;
    let a = (-e * C64::new(r2 + 1.0, r) * 2.0 + (3.0 * r2 + 2.0)) / (r2 * r);
    let b = (e * C64::new(r2 - 3.0, -3.0 * r) * 2.0 + (r2 + 6.0)) / (r2 * r);
    i * (big_t / (4.0 * PI)) * (a + b * c)
}

/// First-order solid-angle integral whose exact value is
/// [`short_time_amplitude`]: `-(T / 2 pi^2) int sin^2(alpha) exp(-i r cos Theta)`
/// over the forward hemisphere.
pub fn short_time_integrand_check(
    point: &FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
) -> Result<Estimate<C64>> {
    let (st, ct) = point.theta.sin_cos();
    let r = point.r;
    let f = move |cos_big: f64, phi: f64| {
        let sin_big = (1.0 - cos_big * cos_big).max(0.0).sqrt();
        C64::from_polar(sin2_alpha(ct, st, cos_big, sin_big, phi.cos()), -r * cos_big)
    };
    let est = integrate_hemisphere(f, 1.0, r, spec)?;
    let scale = -params.scaled_time() / (2.0 * PI * PI);
    Ok(Estimate {
        value: est.value * scale,
        error: est.error * scale.abs(),
        evaluations: est.evaluations,
    })
}

/// Long-time asymptotic exciton amplitude, two `J0` terms with a `1/r`
/// envelope.
pub fn asymptotic_amplitude(point: &FieldPoint, params: &SimParams) -> Result<C64> {
    if !(point.r > 0.0) {
        return domain("asymptotic amplitude is singular at r = 0");
    }
    let big_t = params.scaled_time();
    let (z, rho) = (point.z(), point.rho());
    let r2 = z * z + rho * rho;
    let a = rho * rho / r2;
    let g = (2.0 * z * z + rho * rho) / r2;
    let pref = C64::new(0.0, 1.0 / (2.0 * PI * r2.sqrt()));
    let first = C64::from_polar(j0(0.5 * big_t * a), -0.5 * big_t * g);
    let second = C64::from_polar(j0(big_t * a), -big_t * g);
    Ok(pref * (first - second))
}

/// Angular factor of the asymptotic population,
/// `|exp(i T (2 - sin^2) / 2) J0(T sin^2 / 2) - J0(T sin^2)|^2`.
pub fn angular_profile(theta: f64, scaled_time: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return domain(format!("theta must lie in [0, pi], got {theta}"));
    }
    if !(scaled_time >= 0.0) || !scaled_time.is_finite() {
        return domain(format!("T must be finite and >= 0, got {scaled_time}"));
    }
    let a = theta.sin().powi(2);
    let big_t = scaled_time;
    let v = C64::from_polar(j0(0.5 * big_t * a), 0.5 * big_t * (2.0 - a)) - j0(big_t * a);
    Ok(v.norm_sqr())
}

/// Which amplitude formula a map uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Full,
    ShortTime,
    Asymptotic,
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Model::Full),
            "short_time" => Ok(Model::ShortTime),
            "asymptotic" => Ok(Model::Asymptotic),
            _ => Err(Error::Config(format!("unknown model {s:?}"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Full => "full",
            Model::ShortTime => "short_time",
            Model::Asymptotic => "asymptotic",
        })
    }
}

/// Evenly spaced samples from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        let a = Self { start, end, count };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return domain("axis needs at least one sample");
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return domain("axis bounds must be finite");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.end
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// Rectangular grid in polar `(r, theta)` or cylindrical `(z, rho)` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Polar { r: Axis, theta: Axis },
    Cylindrical { z: Axis, rho: Axis },
}

impl GridSpec {
    /// Points in row-major order: outer axis first (`r` or `z`).
    pub fn points(&self) -> Result<Vec<FieldPoint>> {
        match self {
            GridSpec::Polar { r, theta } => {
                r.validate()?;
                theta.validate()?;
                let ts = theta.values();
                let mut out = Vec::with_capacity(r.count * theta.count);
                for rv in r.values() {
                    for &tv in &ts {
                        out.push(FieldPoint::new(rv, tv)?);
                    }
                }
                Ok(out)
            }
            GridSpec::Cylindrical { z, rho } => {
                z.validate()?;
                rho.validate()?;
                let rs = rho.values();
                let mut out = Vec::with_capacity(z.count * rho.count);
                for zv in z.values() {
                    for &pv in &rs {
                        out.push(FieldPoint::from_cylindrical(zv, pv)?);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Regime flags attached to each evaluated point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub weak_coupling: bool,
    pub short_time: bool,
    pub asymptotic: bool,
}

impl Validity {
    pub fn at(point: &FieldPoint, params: &SimParams) -> Self {
        let big_t = params.scaled_time();
        Self {
            weak_coupling: params.weak_coupling(),
            short_time: big_t <= SHORT_TIME_MAX_T
                && point.r <= SHORT_TIME_MAX_R_OVER_T * params.time,
            asymptotic: big_t >= ASYMPTOTIC_MIN_T && point.r > 0.0,
        }
    }

    pub fn for_model(&self, model: Model) -> bool {
        match model {
            Model::Full => self.weak_coupling,
            Model::ShortTime => self.short_time,
            Model::Asymptotic => self.asymptotic,
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub point: FieldPoint,
    pub psi: C64,
    /// Photon amplitude, only computed by the full model.
    pub phi: Option<C64>,
    pub population: f64,
    pub err_est: f64,
    pub validity: Validity,
    /// `None` on success, otherwise the failure message.
    pub failure: Option<String>,
}

impl FieldSample {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub grid: GridSpec,
    pub model: Model,
    pub params: SimParams,
    pub quad_spec: QuadratureSpec,
    pub samples: Vec<FieldSample>,
}

impl FieldMap {
    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| !s.ok()).count()
    }
}

fn evaluate_point(
    point: FieldPoint,
    params: &SimParams,
    spec: &QuadratureSpec,
    model: Model,
    with_photon: bool,
) -> FieldSample {
    let validity = Validity::at(&point, params);
    let (psi, phi, err_est, failure) = match model {
        Model::ShortTime => (short_time_amplitude(&point, params), None, 0.0, None),
        Model::Asymptotic => match asymptotic_amplitude(&point, params) {
            Ok(v) => (v, None, 0.0, None),
            Err(e) => (C64::new(f64::NAN, f64::NAN), None, f64::NAN, Some(e.to_string())),
        },
        Model::Full => {
            let psi = excited_amplitude(&point, params, spec);
            let phi = if with_photon {
                Some(photon_amplitude(&point, params, spec))
            } else {
                None
            };
            match (psi, phi) {
                (Ok(p), None) => (p.value, None, p.error, None),
                (Ok(p), Some(Ok(f))) => (p.value, Some(f.value), p.error, None),
                (Ok(p), Some(Err(e))) => (p.value, None, p.error, Some(e.to_string())),
                (Err(e), _) => {
                    let best = match e {
                        Error::Convergence { best_re, best_im, .. } => C64::new(best_re, best_im),
                        _ => C64::new(f64::NAN, f64::NAN),
                    };
                    let err = match e {
                        Error::Convergence { achieved, .. } => achieved,
                        _ => f64::NAN,
                    };
                    (best, None, err, Some(e.to_string()))
                }
            }
        }
    };
    FieldSample {
        point,
        psi,
        phi,
        population: psi.norm_sqr(),
        err_est,
        validity,
        failure,
    }
}

/// Evaluates `model` on every grid point. Points are processed in parallel
/// and assembled in grid order; a point that fails carries its error instead
/// of aborting the map.
pub fn field_map(
    grid: &GridSpec,
    params: &SimParams,
    spec: &QuadratureSpec,
    model: Model,
) -> Result<FieldMap> {
    field_map_with(grid, params, spec, model, false)
}

/// As [`field_map`], optionally also computing the photon amplitude for the
/// full model.
pub fn field_map_with(
    grid: &GridSpec,
    params: &SimParams,
    spec: &QuadratureSpec,
    model: Model,
    with_photon: bool,
) -> Result<FieldMap> {
    spec.validate()?;
    let points = grid.points()?;
    let samples = points
        .into_par_iter()
        .map(|p| evaluate_point(p, params, spec, model, with_photon))
        .collect();
    Ok(FieldMap {
        grid: *grid,
        model,
        params: *params,
        quad_spec: *spec,
        samples,
    })
}

/// One sample along a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSample {
    pub r: f64,
    pub population: f64,
    pub err_est: f64,
    pub failure: Option<String>,
}

/// Population of the full model along the ray at angle `theta`, at
/// `samples` evenly spaced radii in `(0, r_max]`.
pub fn radial_profile(
    theta: f64,
    r_max: f64,
    samples: usize,
    params: &SimParams,
    spec: &QuadratureSpec,
) -> Result<Vec<RadialSample>> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return domain(format!("r_max must be finite and > 0, got {r_max}"));
    }
    if samples == 0 {
        return domain("need at least one radial sample");
    }
    spec.validate()?;
    let radii: Vec<f64> = (1..=samples)
        .map(|i| r_max * i as f64 / samples as f64)
        .collect();
    let points = radii
        .iter()
        .map(|&r| FieldPoint::new(r, theta))
        .collect::<Result<Vec<_>>>()?;
    let budget: f64 = points
        .iter()
        .map(|p| {
            let cut = cone_cut(p, params);
            kernel_phase_rate(p, params, cut) * cut / spec.oscillation_panel_cap
        })
        .sum();
    if budget > RADIAL_PANEL_BUDGET {
        return domain(format!(
            "radial profile needs ~{budget:.3e} initial panels, above the budget {RADIAL_PANEL_BUDGET:.1e}"
        ));
    }
    Ok(points
        .into_par_iter()
        .map(|p| {
            let s = evaluate_point(p, params, spec, Model::Full, false);
            RadialSample {
                r: p.r,
                population: s.population,
                err_est: s.err_est,
                failure: s.failure,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(r: f64, theta: f64) -> FieldPoint {
        FieldPoint::new(r, theta).unwrap()
    }

    #[test]
    fn cylindrical_roundtrip() {
        let p = FieldPoint::from_cylindrical(3.0, 4.0).unwrap();
        assert!((p.r - 5.0).abs() < 1e-15);
        assert!((p.z() - 3.0).abs() < 1e-14);
        assert!((p.rho() - 4.0).abs() < 1e-14);
        assert!(FieldPoint::new(-1.0, 0.0).is_err());
        assert!(FieldPoint::new(1.0, 4.0).is_err());
    }

    #[test]
    fn full_amplitudes_vanish_without_coupling_or_time() {
        let spec = QuadratureSpec::default();
        let zero_u = SimParams::new(0.0, 10.0).unwrap();
        let zero_t = SimParams::new(0.05, 0.0).unwrap();
        for p in [pt(0.0, 0.0), pt(2.0, 1.0)] {
            for params in [zero_u, zero_t] {
                assert_eq!(excited_amplitude(&p, &params, &spec).unwrap().value, C64::default());
                assert_eq!(photon_amplitude(&p, &params, &spec).unwrap().value, C64::default());
            }
        }
    }

    #[test]
    fn short_time_origin_limit() {
        let params = SimParams::from_scaled_time(0.05, 0.01).unwrap();
        let v = short_time_amplitude(&pt(0.0, 0.3), &params);
        let lim = -2.0 * 0.01 / (3.0 * PI);
        assert!((v.re - lim).abs() < 1e-16 && v.im == 0.0);
    }

    #[test]
    fn short_time_branches_meet() {
        let params = SimParams::from_scaled_time(0.05, 0.01).unwrap();
        for &th in &[0.0, 0.8, PI / 2.0] {
            let lo = short_time_amplitude(&pt(SHORT_TIME_SERIES_RADIUS * (1.0 - 1e-12), th), &params);
            let hi = short_time_amplitude(&pt(SHORT_TIME_SERIES_RADIUS, th), &params);
            assert!((lo - hi).norm() < 1e-10 * hi.norm());
        }
    }

    #[test]
    fn short_time_isotropic_at_45_degrees() {
        let params = SimParams::from_scaled_time(0.05, 0.02).unwrap();
        let r = 3.0;
        let v = short_time_amplitude(&pt(r, PI / 4.0), &params);
        let e = C64::from_polar(1.0, -r);
        let a = (-e * C64::new(r * r + 1.0, r) * 2.0 + (3.0 * r * r + 2.0)) / r.powi(3);
        let iso = C64::i() * (0.02 / (4.0 * PI)) * a;
        assert!((v - iso).norm() < 1e-15);
    }

    #[test]
    fn asymptotic_on_axis() {
        let params = SimParams::from_scaled_time(0.01, 3.7).unwrap();
        let z = 2.5;
        let v = asymptotic_amplitude(&pt(z, 0.0), &params).unwrap();
        let t = params.scaled_time();
        let expect = (t / 2.0).sin().powi(2) / (PI * z).powi(2);
        assert!((v.norm_sqr() - expect).abs() < 1e-14 * expect.max(1e-300));
        assert!(asymptotic_amplitude(&pt(0.0, 0.0), &params).is_err());
    }

    #[test]
    fn asymptotic_cancels_at_two_pi() {
        let params = SimParams::from_scaled_time(0.01, 2.0 * PI).unwrap();
        let v = asymptotic_amplitude(&pt(1.3, 0.0), &params).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn asymptotic_inverse_square() {
        let params = SimParams::from_scaled_time(0.01, 15.0).unwrap();
        for &th in &[0.2, 1.0, 2.2] {
            let a = asymptotic_amplitude(&pt(1.7, th), &params).unwrap().norm_sqr();
            let b = asymptotic_amplitude(&pt(3.4, th), &params).unwrap().norm_sqr();
            assert!((b / a - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn angular_profile_consistent_with_asymptotic_amplitude() {
        let params = SimParams::from_scaled_time(0.01, 15.0).unwrap();
        for &th in &[0.0, 0.3, 1.2, PI / 2.0, 2.9] {
            let r = 2.0;
            let pop = asymptotic_amplitude(&pt(r, th), &params).unwrap().norm_sqr();
            let ang = angular_profile(th, params.scaled_time()).unwrap();
            assert!((pop * (2.0 * PI * r).powi(2) - ang).abs() < 1e-12);
        }
    }

    #[test]
    fn angular_profile_edges() {
        let t = 15.0;
        assert!((angular_profile(0.0, t).unwrap() - 4.0 * (t / 2.0).sin().powi(2)).abs() < 1e-12);
        assert!(angular_profile(-0.1, t).is_err());
        assert!(angular_profile(0.1, -1.0).is_err());
        for &th in &[0.1, 0.9, 1.4] {
            assert!((angular_profile(th, t).unwrap() - angular_profile(PI - th, t).unwrap()).abs() < 1e-12);
        }
        let direct = (C64::from_polar(crate::specfun::j0(7.5), 7.5) - crate::specfun::j0(15.0)).norm_sqr();
        assert!((angular_profile(PI / 2.0, 15.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn axis_values() {
        let a = Axis::new(0.0, 1.0, 5).unwrap();
        assert_eq!(a.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Axis::new(2.0, 3.0, 1).unwrap().values(), vec![2.0]);
        assert!(Axis::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn map_flags_regimes() {
        let params = SimParams::from_scaled_time(0.01, 0.01).unwrap();
        let grid = GridSpec::Polar {
            r: Axis::new(0.0, 5.0, 3).unwrap(),
            theta: Axis::new(0.0, PI, 3).unwrap(),
        };
        let map = field_map(&grid, &params, &QuadratureSpec::default(), Model::ShortTime).unwrap();
        assert_eq!(map.samples.len(), 9);
        assert!(map.samples.iter().all(|s| s.validity.short_time));
        let map = field_map(&grid, &params, &QuadratureSpec::default(), Model::Asymptotic).unwrap();
        assert_eq!(map.failures(), 3);
        assert!(!map.samples[0].validity.asymptotic);
    }

    #[test]
    fn radial_budget_guard() {
        let params = SimParams::from_scaled_time(0.05, 100.0).unwrap();
        let r = radial_profile(PI / 2.0, 1e6, 1000, &params, &QuadratureSpec::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn radial_without_coupling_is_zero() {
        let params = SimParams::new(0.0, 50.0).unwrap();
        let prof = radial_profile(PI / 2.0, 10.0, 5, &params, &QuadratureSpec::default()).unwrap();
        assert!(prof.iter().all(|s| s.population == 0.0));
    }
}
