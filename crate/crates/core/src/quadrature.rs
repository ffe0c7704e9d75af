//! Solid-angle integration over the light-cone-restricted hemisphere.
//!
//! The outer variable is `u = cos(Theta)` on `(0, cone_cut]`, integrated with
//! adaptive 15-point Gauss-Kronrod panels. Initial panels are narrow enough
//! that a phase rate of `phase_rate` radians per unit `u` changes by at most
//! `oscillation_panel_cap` across any panel. The inner azimuth `Phi` is
//! periodic and is done with the trapezoid rule, doubling the point count
//! until successive estimates agree.
//!
//! Panels are refined worst-first (lowest index on ties) and summed in order
//! of position, so results are bit-identical across runs.

use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

/// Hard ceiling on the number of live panels in one integral.
const MAX_PANELS: usize = 50_000;

/// Tuning of the hemisphere integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub base_panels_theta: usize,
    pub base_panels_phi: usize,
    pub max_refinement_depth: u32,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest phase change per initial `cos(Theta)` panel, in radians.
    pub oscillation_panel_cap: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            base_panels_theta: 4,
            base_panels_phi: 16,
            max_refinement_depth: 24,
            rel_tol: 1e-7,
            abs_tol: 1e-12,
            oscillation_panel_cap: PI / 4.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base_panels_theta == 0 || self.base_panels_phi == 0 {
            return domain("panel counts must be positive");
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return domain(format!(
                "tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            ));
        }
        if !(self.oscillation_panel_cap > 0.0 && self.oscillation_panel_cap <= PI / 4.0) {
            return domain(format!(
                "oscillation_panel_cap must lie in (0, pi/4], got {}",
                self.oscillation_panel_cap
            ));
        }
        if self.max_refinement_depth > 60 {
            return domain("max_refinement_depth above 60 is meaningless in double precision");
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// Values the integrator can sum.
pub trait Scalar:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
    fn parts(&self) -> (f64, f64);
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn parts(&self) -> (f64, f64) {
        (*self, 0.0)
    }
}

impl Scalar for C64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

impl<T: Scalar> Estimate<T> {
    pub fn zero() -> Self {
        Self {
            value: T::default(),
            error: 0.0,
            evaluations: 0,
        }
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    depth: u32,
}

/// One Gauss-Kronrod panel. `f` returns a value and the error already made
/// computing it (zero for plain functions).
fn gk15<T: Scalar, F: Fn(f64) -> (T, f64)>(f: &F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (fc, ec) = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut inner_err = ec * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, e1) = f(c - dx);
        let (f2, e2) = f(c + dx);
        let pair = f1 + f2;
        kron = kron + pair * WGK[j];
        inner_err += (e1 + e2) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).magnitude() + inner_err * h.abs())
}

fn initial_panel_count(width: f64, phase_rate: f64, spec: &QuadratureSpec) -> usize {
    let by_phase = (phase_rate.abs() * width / spec.oscillation_panel_cap).ceil();
    let by_phase = if by_phase.is_finite() { by_phase as usize } else { 0 };
    spec.base_panels_theta.max(by_phase).min(MAX_PANELS / 2)
}

/// Adaptive integration on `[a, b]` of a function that reports its own
/// evaluation error.
fn adaptive<T: Scalar, F: Fn(f64) -> (T, f64)>(
    f: &F,
    a: f64,
    b: f64,
    phase_rate: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>> {
    spec.validate()?;
    if a == b {
        return Ok(Estimate::zero());
    }
    let n0 = initial_panel_count((b - a).abs(), phase_rate, spec);
    let width = (b - a) / n0 as f64;
    let mut panels: Vec<Panel<T>> = (0..n0)
        .map(|i| {
            let pa = a + width * i as f64;
            let pb = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
            let (value, error) = gk15(f, pa, pb);
            Panel {
                a: pa,
                b: pb,
                value,
                error,
                depth: 0,
            }
        })
        .collect();
    let mut evaluations = 15 * n0;
    loop {
        let (value, error) = panels
            .iter()
            .fold((T::default(), 0.0), |acc, p| (acc.0 + p.value, acc.1 + p.error));
        let tol = spec.tolerance(value.magnitude());
        if error <= tol {
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let p = panels[worst];
        if p.depth >= spec.max_refinement_depth || panels.len() >= MAX_PANELS {
            return Err(convergence(value, error, tol));
        }
        let mid = 0.5 * (p.a + p.b);
        let (lv, le) = gk15(f, p.a, mid);
        let (rv, re) = gk15(f, mid, p.b);
        evaluations += 30;
        panels[worst] = Panel {
            a: p.a,
            b: mid,
            value: lv,
            error: le,
            depth: p.depth + 1,
        };
        panels.insert(
            worst + 1,
            Panel {
                a: mid,
                b: p.b,
                value: rv,
                error: re,
                depth: p.depth + 1,
            },
        );
    }
}

fn convergence<T: Scalar>(value: T, achieved: f64, requested: f64) -> Error {
    let (best_re, best_im) = value.parts();
    Error::Convergence {
        best_re,
        best_im,
        achieved,
        requested,
    }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// `phase_rate` is the expected oscillation rate of the integrand in radians
/// per unit length; it only sets the initial subdivision.
pub fn integrate_interval<T: Scalar, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    phase_rate: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>> {
    if !a.is_finite() || !b.is_finite() {
        return domain("integration limits must be finite");
    }
    adaptive(&|x| (f(x), 0.0), a, b, phase_rate, spec)
}

/// Periodic trapezoid rule over `Phi` in `[0, 2 pi)`, doubling until two
/// successive estimates agree. Returns the value, its error estimate and the
/// number of evaluations.
fn azimuthal<F: Fn(f64) -> C64>(f: &F, spec: &QuadratureSpec) -> (C64, f64, usize) {
    let mut n = spec.base_panels_phi.max(2);
    let mut sum = C64::default();
    let mut abs_sum = 0.0;
    for j in 0..n {
        let v = f(TAU * j as f64 / n as f64);
        sum += v;
        abs_sum += v.norm();
    }
    let mut evals = n;
    let mut estimate = sum * (TAU / n as f64);
    let rel = 1e-2 * spec.rel_tol;
    let abs = 1e-2 * spec.abs_tol / TAU;
    for _ in 0..spec.max_refinement_depth.min(16) {
        let mut odd = C64::default();
        for j in 0..n {
            let v = f(TAU * (2 * j + 1) as f64 / (2 * n) as f64);
            odd += v;
            abs_sum += v.norm();
        }
        evals += n;
        sum += odd;
        n *= 2;
        let next = sum * (TAU / n as f64);
        let diff = (next - estimate).norm();
        let l1 = abs_sum * (TAU / n as f64);
        estimate = next;
        if diff <= abs.max(rel * l1) {
            return (estimate, diff, evals);
        }
        if diff == 0.0 {
            return (estimate, 0.0, evals);
        }
    }
    // Not converged: report the last difference as the error and let the
    // outer tolerance decide.
    let l1 = abs_sum * (TAU / n as f64);
    (estimate, l1.max(abs), evals)
}

/// Integral of `f(cos_theta, phi)` over the solid angle with
/// `0 < cos(Theta) <= cone_cut`.
///
/// `cone_cut` is `min(1, t/r)` for the light-cone restricted kernels; it must
/// lie in `(0, 1]`. `phase_rate` bounds the oscillation of the integrand in
/// `cos(Theta)` and sets the initial panel widths.
pub fn integrate_hemisphere<F>(
    f: F,
    cone_cut: f64,
    phase_rate: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<C64>>
where
    F: Fn(f64, f64) -> C64,
{
    if !(cone_cut > 0.0 && cone_cut <= 1.0) {
        return domain(format!("cone_cut must lie in (0, 1], got {cone_cut}"));
    }
    let evals = std::cell::Cell::new(0usize);
    let outer = |u: f64| {
        let (v, e, n) = azimuthal(&|phi| f(u, phi), spec);
        evals.set(evals.get() + n);
        (v, e)
    };
    let mut est = adaptive(&outer, 0.0, cone_cut, phase_rate, spec)?;
    est.evaluations = evals.get();
    Ok(est)
}

/// Fixed composite 7-point Gauss-Legendre rule with `panels` equal panels.
///
/// Nominal order 14; used to check convergence behaviour.
pub fn composite_gauss_legendre<T: Scalar, F: Fn(f64) -> T>(f: F, a: f64, b: f64, panels: usize) -> T {
    let w = (b - a) / panels as f64;
    let mut total = T::default();
    for i in 0..panels {
        let c = a + w * (i as f64 + 0.5);
        let h = 0.5 * w;
        let mut s = f(c) * WG[3];
        for j in 0..3 {
            let dx = h * XGK[2 * j + 1];
            s = s + (f(c - dx) + f(c + dx)) * WG[j];
        }
        total = total + s * h;
    }
    total
}

fn check_polar(name: &str, v: f64) -> Result<()> {
    if !(0.0..=PI).contains(&v) {
        return domain(format!("{name} must lie in [0, pi], got {v}"));
    }
    Ok(())
}

fn check_azimuth(name: &str, v: f64) -> Result<()> {
    if !(0.0..=TAU).contains(&v) {
        return domain(format!("{name} must lie in [0, 2 pi), got {v}"));
    }
    Ok(())
}

/// `sin^2(alpha)` of a direction given in the radius-vector frame.
///
/// `theta` is the angle between the polarization and the radius vector.
pub fn sin2_alpha_from_r_frame(theta: f64, big_theta: f64, big_phi: f64) -> Result<f64> {
    check_polar("theta", theta)?;
    check_polar("Theta", big_theta)?;
    check_azimuth("Phi", big_phi)?;
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = big_theta.sin_cos();
    Ok(sin2_alpha(ct, st, ca, sa, big_phi.cos()))
}

/// `cos(Theta)` of a direction given in the polarization frame.
pub fn cos_theta_from_d_frame(theta: f64, alpha: f64, phi: f64) -> Result<f64> {
    check_polar("theta", theta)?;
    check_polar("alpha", alpha)?;
    check_azimuth("phi", phi)?;
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    Ok((ct * ca + st * sa * phi.cos()).clamp(-1.0, 1.0))
}

#[inline]
pub(crate) fn sin2_alpha(cos_t: f64, sin_t: f64, cos_big: f64, sin_big: f64, cos_phi: f64) -> f64 {
    let c = cos_t * cos_big + sin_t * sin_big * cos_phi;
    (1.0 - c * c).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn hemisphere_area() {
        let e = integrate_hemisphere(|_, _| C64::new(1.0, 0.0), 1.0, 0.0, &spec()).unwrap();
        assert!((e.value.re - TAU).abs() < 1e-13);
        assert_eq!(e.value.im, 0.0);
    }

    #[test]
    fn cosine_weight() {
        let e = integrate_hemisphere(|u, _| C64::new(u, 0.0), 1.0, 0.0, &spec()).unwrap();
        assert!((e.value.re - PI).abs() < 1e-13);
    }

    #[test]
    fn plane_wave_closed_form() {
        let r = 20.0;
        let e = integrate_hemisphere(|u, _| C64::from_polar(1.0, -r * u), 1.0, r, &spec()).unwrap();
        let i = C64::i();
        let exact = (C64::from_polar(1.0, -r) - 1.0) * TAU / (-i * r);
        assert!((e.value - exact).norm() < 1e-10 * exact.norm());
    }

    #[test]
    fn azimuthal_dependence_integrates_out() {
        // cos^2 Phi averages to 1/2
        let e = integrate_hemisphere(|_, p| C64::new(p.cos().powi(2), 0.0), 1.0, 0.0, &spec()).unwrap();
        assert!((e.value.re - PI).abs() < 1e-12);
    }

    #[test]
    fn partial_cone() {
        let e = integrate_hemisphere(|_, _| C64::new(1.0, 0.0), 0.25, 0.0, &spec()).unwrap();
        assert!((e.value.re - TAU * 0.25).abs() < 1e-13);
    }

    #[test]
    fn invalid_inputs() {
        assert!(integrate_hemisphere(|_, _| C64::new(1.0, 0.0), 0.0, 0.0, &spec()).is_err());
        assert!(integrate_hemisphere(|_, _| C64::new(1.0, 0.0), 1.5, 0.0, &spec()).is_err());
        let mut s = spec();
        s.oscillation_panel_cap = 1.0;
        assert!(s.validate().is_err());
        s = spec();
        s.rel_tol = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let mut s = spec();
        s.max_refinement_depth = 1;
        s.rel_tol = 1e-15;
        s.abs_tol = 1e-300;
        let r = integrate_interval(|x: f64| (1.0 / (x + 1e-9)).sqrt(), 0.0, 1.0, 0.0, &s);
        match r {
            Err(Error::Convergence { best_re, achieved, .. }) => {
                assert!(best_re > 1.0 && achieved > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn real_interval() {
        let e = integrate_interval(|x: f64| x.exp(), 0.0, 1.0, 0.0, &spec()).unwrap();
        assert!((e.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn frames_reduce_in_special_cases() {
        for &big in &[0.0, 0.4, 1.3, PI] {
            let v = sin2_alpha_from_r_frame(0.0, big, 2.0).unwrap();
            assert!((v - big.sin().powi(2)).abs() < 1e-15);
            let v = sin2_alpha_from_r_frame(PI / 2.0, big, PI / 2.0).unwrap();
            assert!((v - 1.0).abs() < 1e-15);
        }
        for &a in &[0.0, 0.7, 2.0] {
            assert!((cos_theta_from_d_frame(0.0, a, 1.0).unwrap() - a.cos()).abs() < 1e-15);
            assert!((cos_theta_from_d_frame(PI / 2.0, a, 0.0).unwrap() - a.sin()).abs() < 1e-15);
        }
        assert!(sin2_alpha_from_r_frame(-0.1, 0.0, 0.0).is_err());
        assert!(cos_theta_from_d_frame(0.0, 0.0, 7.0).is_err());
    }
}
