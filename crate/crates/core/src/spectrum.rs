//! Emission spectrum of a finite cloud.
//!
//! The density profile enters through its normalized 3D radial Fourier
//! transform `n(kappa) = int n(r) sinc(kappa r) r^2 dr / int n(r) r^2 dr`.
//! Profiles are parameterized as `n(r) = f(r / L)`, so the transform is
//! `F(kappa L)` with `F` tabulated once per shape on a uniform grid in
//! `q = kappa L` and interpolated with quintic Hermite splines using exact
//! first and second derivatives.

use crate::error::{domain, Error, Result};
use crate::kspace::{SimParams, SOURCE_NORM};
use crate::quadrature::{integrate_interval, QuadratureSpec};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Grid step of the transform table in `q = kappa L`.
const TABLE_STEP: f64 = 0.02;
/// Table points per extension chunk.
const TABLE_CHUNK: usize = 250;
/// Largest tabulated `q`.
const TABLE_Q_MAX: f64 = 100.0;
/// The table ends at the first point where both `|F|` and `|F'| step` fall
/// below this; beyond it `F` is taken as zero.
const TABLE_TAIL: f64 = 1e-12;
/// `f(x)` below this counts as the edge of the profile support.
const SUPPORT_CUTOFF: f64 = 1e-18;

/// Real-space shape `f(x)` with `x = r / L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ProfileShape {
    /// `1 / cosh^2(x)`.
    Sech2,
    /// `exp(-x^2)`.
    Gaussian,
    /// Piecewise-linear samples `(x_i, f_i)`, zero beyond the last one.
    /// `x` must start at 0 and increase strictly.
    Tabulated { x: Vec<f64>, f: Vec<f64> },
}

impl ProfileShape {
    fn validate(&self) -> Result<()> {
        if let ProfileShape::Tabulated { x, f } = self {
            if x.len() < 2 || x.len() != f.len() {
                return domain("tabulated profile needs >= 2 samples of equal length");
            }
            if x[0] != 0.0 {
                return domain("tabulated profile must start at x = 0");
            }
            if x.windows(2).any(|w| !(w[1] > w[0])) {
                return domain("tabulated profile x must increase strictly");
            }
            if f.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return domain("tabulated profile values must be finite and >= 0");
            }
            if f.iter().all(|v| *v == 0.0) {
                return domain("tabulated profile is identically zero");
            }
        }
        Ok(())
    }

    /// `f(x)` for `x >= 0`.
    pub fn value(&self, x: f64) -> f64 {
        let x = x.abs();
        match self {
            ProfileShape::Sech2 => {
                if x > 350.0 {
                    0.0
                } else {
                    1.0 / x.cosh().powi(2)
                }
            }
            ProfileShape::Gaussian => (-x * x).exp(),
            ProfileShape::Tabulated { x: xs, f } => {
                let last = xs.len() - 1;
                if x >= xs[last] {
                    return if x == xs[last] { f[last] } else { 0.0 };
                }
                let i = xs.partition_point(|&v| v <= x) - 1;
                let s = (x - xs[i]) / (xs[i + 1] - xs[i]);
                f[i] + s * (f[i + 1] - f[i])
            }
        }
    }

    /// Breakpoints of the integration in `x`, ending at the support edge.
    fn breakpoints(&self) -> Vec<f64> {
        match self {
            ProfileShape::Tabulated { x, .. } => x.clone(),
            _ => {
                let mut edge = 1.0;
                while self.value(edge) > SUPPORT_CUTOFF {
                    edge += 0.5;
                }
                vec![0.0, edge]
            }
        }
    }
}

/// `sin(s) / s`.
fn sinc(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        1.0 - s * s / 6.0
    } else {
        s.sin() / s
    }
}

/// Derivative of `sin(s) / s`.
fn sinc_prime(s: f64) -> f64 {
    if s.abs() < 0.1 {
        let s2 = s * s;
        s * (-1.0 / 3.0 + s2 * (1.0 / 30.0 + s2 * (-1.0 / 840.0 + s2 / 45360.0)))
    } else {
        (s * s.cos() - s.sin()) / (s * s)
    }
}

/// Second derivative of `sin(s) / s`.
fn sinc_second(s: f64) -> f64 {
    let s2 = s * s;
    if s.abs() < 0.1 {
        -1.0 / 3.0 + s2 * (0.1 + s2 * (-1.0 / 168.0 + s2 * (1.0 / 6480.0 - s2 / 443520.0)))
    } else {
        let (sn, cs) = s.sin_cos();
        (2.0 * sn - 2.0 * s * cs - s2 * sn) / (s2 * s)
    }
}

/// Tabulated `F(q)`, `F'(q)` and `F''(q)` on `q = i * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct FtTable {
    pub step: f64,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub second: Vec<f64>,
    /// Bound on `|F|` beyond the table.
    pub tail_bound: f64,
}

impl FtTable {
    pub fn q_max(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    /// Quintic Hermite interpolation of `F(|q|)`, zero beyond the table.
    pub fn eval(&self, q: f64) -> f64 {
        self.eval_with_deriv(q).0
    }

    fn eval_with_deriv(&self, q: f64) -> (f64, f64) {
        let sign = if q < 0.0 { -1.0 } else { 1.0 };
        let q = q.abs();
        let last = self.values.len() - 1;
        let pos = q / self.step;
        if pos >= last as f64 {
            return if pos == last as f64 {
                (self.values[last], sign * self.derivs[last])
            } else {
                (0.0, 0.0)
            };
        }
        let i = pos as usize;
        let s = pos - i as f64;
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
        let (c0, c1) = (self.second[i] * h * h, self.second[i + 1] * h * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s3 * s;
        let s5 = s4 * s;
        let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
        let h3 = 0.5 * (s3 - 2.0 * s4 + s5);
        let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        let v = h0 * y0 + h1 * d0 + h2 * c0 + h3 * c1 + h4 * d1 + h5 * y1;
        let g0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
        let g1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
        let g2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
        let g3 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
        let g4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
        let g5 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
        let dv = (g0 * y0 + g1 * d0 + g2 * c0 + g3 * c1 + g4 * d1 + g5 * y1) / h;
        (v, sign * dv)
    }
}

fn transform_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-16,
        max_refinement_depth: 40,
        ..QuadratureSpec::default()
    }
}

/// Unnormalized `int f(x) g(q x) x^2 dx` summed over the breakpoint pieces.
fn radial_moment(
    shape: &ProfileShape,
    pieces: &[f64],
    q: f64,
    kernel: impl Fn(f64) -> f64,
) -> Result<f64> {
    let spec = transform_spec();
    let mut total = 0.0;
    for w in pieces.windows(2) {
        let est = integrate_interval(|x| shape.value(x) * kernel(x) * x * x, w[0], w[1], q, &spec)?;
        total += est.value;
    }
    Ok(total)
}

fn build_table(shape: &ProfileShape) -> Result<FtTable> {
    let pieces = shape.breakpoints();
    let norm = radial_moment(shape, &pieces, 0.0, |_| 1.0)?;
    if !(norm > 0.0) {
        return domain("profile has zero volume");
    }
    let point = |i: usize| -> Result<(f64, f64, f64)> {
        let q = TABLE_STEP * i as f64;
        let v = radial_moment(shape, &pieces, q, |x| sinc(q * x))?;
        let d = radial_moment(shape, &pieces, q, |x| x * sinc_prime(q * x))?;
        let c = radial_moment(shape, &pieces, q, |x| x * x * sinc_second(q * x))?;
        Ok((v / norm, d / norm, c / norm))
    };
    let mut values = Vec::new();
    let mut derivs = Vec::new();
    let mut second = Vec::new();
    let max_points = (TABLE_Q_MAX / TABLE_STEP).round() as usize + 1;
    let mut tail_bound = f64::INFINITY;
    while values.len() < max_points {
        let start = values.len();
        let end = (start + TABLE_CHUNK).min(max_points);
        let chunk = (start..end)
            .into_par_iter()
            .map(point)
            .collect::<Result<Vec<_>>>()?;
        let cut = chunk
            .iter()
            .position(|p| p.0.abs() < TABLE_TAIL && p.1.abs() * TABLE_STEP < TABLE_TAIL);
        let keep = cut.map_or(chunk.len(), |c| c + 1);
        tail_bound = chunk.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
        for &(v, d, c) in &chunk[..keep] {
            values.push(v);
            derivs.push(d);
            second.push(c);
        }
        if cut.is_some() {
            tail_bound = TABLE_TAIL;
            break;
        }
    }
    Ok(FtTable {
        step: TABLE_STEP,
        values,
        derivs,
        second,
        tail_bound,
    })
}

static SECH2_TABLE: OnceLock<FtTable> = OnceLock::new();
static GAUSSIAN_TABLE: OnceLock<FtTable> = OnceLock::new();

fn cached(cell: &OnceLock<FtTable>, shape: &ProfileShape) -> Result<FtTable> {
    if let Some(t) = cell.get() {
        return Ok(t.clone());
    }
    let t = build_table(shape)?;
    Ok(cell.get_or_init(|| t).clone())
}

/// Cloud density profile with its tabulated transform.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub length: f64,
    pub shape: ProfileShape,
    pub table: FtTable,
}

impl DensityProfile {
    pub fn new(shape: ProfileShape, length: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return domain(format!("profile length must be finite and > 0, got {length}"));
        }
        shape.validate()?;
        let table = match shape {
            ProfileShape::Sech2 => cached(&SECH2_TABLE, &shape)?,
            ProfileShape::Gaussian => cached(&GAUSSIAN_TABLE, &shape)?,
            ProfileShape::Tabulated { .. } => build_table(&shape)?,
        };
        Ok(Self { length, shape, table })
    }

    pub fn sech2(length: f64) -> Result<Self> {
        Self::new(ProfileShape::Sech2, length)
    }

    /// Same shape and table with a different length.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return domain(format!("profile length must be finite and > 0, got {length}"));
        }
        Ok(Self {
            length,
            ..self.clone()
        })
    }

    /// Real-space density, `n(0) = 1` for the built-in shapes.
    pub fn density(&self, r: f64) -> f64 {
        self.shape.value(r / self.length)
    }

    /// Largest `|kappa|` covered by the table.
    pub fn kappa_max(&self) -> f64 {
        self.table.q_max() / self.length
    }

    fn ft_with_deriv(&self, kappa: f64) -> (f64, f64) {
        let (v, d) = self.table.eval_with_deriv(kappa * self.length);
        (v, d * self.length)
    }
}

/// Normalized radial Fourier transform `n(kappa)`, even in `kappa`.
pub fn density_ft(profile: &DensityProfile, kappa: f64) -> Result<f64> {
    if !kappa.is_finite() {
        return domain(format!("kappa must be finite, got {kappa}"));
    }
    Ok(profile.table.eval(kappa * profile.length))
}

/// One point of an emission spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub delta_omega: f64,
    pub intensity: f64,
}

/// Closed-form spectral intensity `n^2(dw - 1/dw) / (16 pi^4 dw^2)`.
pub fn spectral_intensity(delta_omega: f64, profile: &DensityProfile) -> Result<f64> {
    if !delta_omega.is_finite() {
        return domain(format!("delta_omega must be finite, got {delta_omega}"));
    }
    if delta_omega == 0.0 {
        return domain("spectral intensity is singular at delta_omega = 0; use the limit form");
    }
    let n = density_ft(profile, delta_omega - 1.0 / delta_omega)?;
    Ok(n * n / (16.0 * PI.powi(4) * delta_omega * delta_omega))
}

/// As [`spectral_intensity`], returning the limit value 0 at `delta_omega = 0`.
pub fn spectral_intensity_or_limit(delta_omega: f64, profile: &DensityProfile) -> Result<f64> {
    if delta_omega == 0.0 {
        return Ok(0.0);
    }
    spectral_intensity(delta_omega, profile)
}

/// Closed-form spectrum on `samples` evenly spaced points of `[lo, hi]`.
pub fn spectrum(lo: f64, hi: f64, samples: usize, profile: &DensityProfile) -> Result<Vec<SpectrumPoint>> {
    if samples < 2 || !(hi > lo) {
        return domain("spectrum range needs lo < hi and at least 2 samples");
    }
    let step = (hi - lo) / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let dw = if i + 1 == samples { hi } else { lo + step * i as f64 };
            Ok(SpectrumPoint {
                delta_omega: dw,
                intensity: spectral_intensity_or_limit(dw, profile)?,
            })
        })
        .collect()
}

/// Profile-averaged photon amplitude split at the real pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedAmplitude {
    /// Position of the real pole `kappa_0 = (eps^2 - U^2 sin^2 alpha) / eps`.
    pub kappa_pole: f64,
    /// Principal-value part.
    pub principal: C64,
    /// Half-residue part of the retarded prescription.
    pub pole: C64,
    /// Set when the pole lies outside the tabulated support; bounds the
    /// neglected weight `|n|` there.
    pub truncation: Option<f64>,
}

impl AveragedAmplitude {
    /// Retarded amplitude: principal value plus half residue.
    pub fn retarded(&self) -> C64 {
        self.principal + self.pole
    }

    /// On-shell amplitude: the full residue, i.e. the jump between the
    /// retarded and advanced prescriptions.
    pub fn emission(&self) -> C64 {
        self.pole * 2.0
    }
}

fn averaging_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-10,
        abs_tol: 1e-15,
        max_refinement_depth: 40,
        ..QuadratureSpec::default()
    }
}

/// Averages the steady photon amplitude over `kappa` with weight `n(kappa)`,
/// with the retarded prescription `eps -> eps + i0`.
pub fn averaged_amplitude(
    eps: f64,
    alpha: f64,
    params: &SimParams,
    profile: &DensityProfile,
) -> Result<AveragedAmplitude> {
    if !(alpha > 0.0 && alpha < PI) {
        return domain(format!("alpha must lie in (0, pi), got {alpha}"));
    }
    if !eps.is_finite() {
        return domain(format!("eps must be finite, got {eps}"));
    }
    let us = params.coupling * alpha.sin();
    if !(us > 0.0) {
        return domain("U sin(alpha) must be positive");
    }
    let k_max = profile.kappa_max();
    let spec = averaging_spec();
    let w = us * us;
    let n = |k: f64| profile.ft_with_deriv(k).0;

    if eps == 0.0 {
        // no pole: the denominator is the constant U^2 sin^2 alpha
        let total = integrate_symmetric(&n, k_max, &spec)?;
        return Ok(AveragedAmplitude {
            kappa_pole: f64::INFINITY,
            principal: C64::new(-us * SOURCE_NORM * total / w, 0.0),
            pole: C64::default(),
            truncation: None,
        });
    }

    let k0 = (eps * eps - w) / eps;
    let pref = -us * SOURCE_NORM / eps;
    let (n0, dn0) = profile.ft_with_deriv(k0);
    let inside = k0.abs() < k_max;
    let pv = if inside {
        let quotient = |k: f64| {
            let d = k - k0;
            if d.abs() < 1e-9 * (1.0 + k0.abs()) {
                dn0
            } else {
                (n(k) - n0) / d
            }
        };
        let mut cuts = vec![-k_max, k0, k_max];
        if k0 != 0.0 {
            cuts.push(0.0);
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut sum = 0.0;
        for c in cuts.windows(2) {
            sum += integrate_interval(quotient, c[0], c[1], 0.0, &spec)
                .map_err(|e| convergence_context(e, "principal value"))?
                .value;
        }
        sum + n0 * ((k_max - k0) / (k_max + k0)).ln()
    } else {
        let direct = |k: f64| n(k) / (k - k0);
        let mut sum = 0.0;
        for c in [(-k_max, 0.0), (0.0, k_max)] {
            sum += integrate_interval(direct, c.0, c.1, 0.0, &spec)?.value;
        }
        sum
    };
    Ok(AveragedAmplitude {
        kappa_pole: k0,
        principal: C64::new(pref * pv, 0.0),
        pole: C64::new(0.0, PI * n0 * pref),
        truncation: if inside {
            None
        } else {
            Some(profile.table.tail_bound)
        },
    })
}

fn integrate_symmetric(n: &impl Fn(f64) -> f64, k_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(2.0 * integrate_interval(n, 0.0, k_max, 0.0, spec)?.value)
}

fn convergence_context(e: Error, what: &str) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("{what}: {m}")),
        other => other,
    }
}

/// Spectrum from the on-shell part of the averaged amplitude, with
/// `eps = delta_omega U sin(alpha)`.
pub fn averaged_spectrum(
    delta_omegas: &[f64],
    alpha: f64,
    params: &SimParams,
    profile: &DensityProfile,
) -> Result<Vec<SpectrumPoint>> {
    let us = params.coupling * alpha.sin();
    delta_omegas
        .par_iter()
        .map(|&dw| {
            let amp = averaged_amplitude(dw * us, alpha, params, profile)?;
            Ok(SpectrumPoint {
                delta_omega: dw,
                intensity: amp.emission().norm_sqr(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sech2_exact(q: f64) -> f64 {
        let x = 0.5 * PI * q;
        if x < 1e-3 {
            return 1.0 - x * x / 5.0;
        }
        3.0 * (x * x.cosh() - x.sinh()) / (x * x.sinh().powi(2))
    }

    #[test]
    fn sech2_table_matches_closed_form() {
        let p = DensityProfile::sech2(1.0).unwrap();
        let mut q = 0.0;
        while q < 20.0 {
            let got = density_ft(&p, q).unwrap();
            assert!((got - sech2_exact(q)).abs() < 1e-11, "q={q}: {got} vs {}", sech2_exact(q));
            q += 0.0137;
        }
        assert!(p.table.tail_bound <= TABLE_TAIL);
        assert_eq!(density_ft(&p, p.table.q_max() + 0.1).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_table_matches_closed_form() {
        let p = DensityProfile::new(ProfileShape::Gaussian, 2.0).unwrap();
        for i in 0..200 {
            let k = 0.031 * i as f64;
            let exact = (-(k * 2.0).powi(2) / 4.0).exp();
            assert!((density_ft(&p, k).unwrap() - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn ft_is_even_and_normalized() {
        let p = DensityProfile::sech2(4.0).unwrap();
        assert_eq!(density_ft(&p, 0.0).unwrap(), 1.0);
        for &k in &[0.1, 0.77, 2.3] {
            assert_eq!(density_ft(&p, k).unwrap(), density_ft(&p, -k).unwrap());
        }
        assert!(density_ft(&p, f64::NAN).is_err());
    }

    #[test]
    fn tabulated_step_profile() {
        // uniform ball of radius 1: F(q) = 3 (sin q - q cos q) / q^3
        let shape = ProfileShape::Tabulated {
            x: vec![0.0, 1.0],
            f: vec![1.0, 1.0],
        };
        let p = DensityProfile::new(shape, 1.0).unwrap();
        for &q in &[0.5f64, 1.0, 4.0, 9.3] {
            let exact = 3.0 * (q.sin() - q * q.cos()) / q.powi(3);
            assert!((density_ft(&p, q).unwrap() - exact).abs() < 1e-9, "q={q}");
        }
        assert!(p.table.tail_bound > TABLE_TAIL);
    }

    #[test]
    fn invalid_profiles() {
        assert!(DensityProfile::sech2(0.0).is_err());
        let bad = ProfileShape::Tabulated {
            x: vec![0.0, 0.0],
            f: vec![1.0, 1.0],
        };
        assert!(DensityProfile::new(bad, 1.0).is_err());
    }

    #[test]
    fn intensity_at_unit_detuning() {
        let p = DensityProfile::sech2(4.0).unwrap();
        let v = spectral_intensity(1.0, &p).unwrap();
        assert!((v - 1.0 / (16.0 * PI.powi(4))).abs() < 1e-18);
        assert!(spectral_intensity(0.0, &p).is_err());
        assert_eq!(spectral_intensity_or_limit(0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn averaged_amplitude_vanishes_with_alpha() {
        let params = SimParams::new(0.05, 1.0).unwrap();
        let p = DensityProfile::sech2(80.0).unwrap();
        let a = averaged_amplitude(0.01, 1e-6, &params, &p).unwrap();
        let b = averaged_amplitude(0.01, 1e-3, &params, &p).unwrap();
        assert!(a.retarded().norm() < 1e-3 * b.retarded().norm().max(1e-300) || a.retarded().norm() < 1e-12);
        assert!(averaged_amplitude(0.01, 0.0, &params, &p).is_err());
    }

    #[test]
    fn emission_is_full_residue() {
        let params = SimParams::new(0.05, 1.0).unwrap();
        let us = 0.05;
        let p = DensityProfile::sech2(4.0 / us).unwrap();
        for &dw in &[0.5, 1.0, 1.7] {
            let a = averaged_amplitude(dw * us, PI / 2.0, &params, &p).unwrap();
            let closed = spectral_intensity(dw, &DensityProfile::sech2(4.0).unwrap()).unwrap();
            assert!((a.emission().norm_sqr() - closed).abs() < 1e-9 * closed);
        }
    }

    #[test]
    fn far_pole_is_flagged() {
        let params = SimParams::new(0.05, 1.0).unwrap();
        let p = DensityProfile::sech2(4.0).unwrap();
        let a = averaged_amplitude(1e-6, PI / 2.0, &params, &p).unwrap();
        assert!(a.truncation.is_some());
    }

    #[test]
    fn sinc_derivative_series_match_closed_forms() {
        for &s in &[0.02f64, 0.05, 0.0999] {
            let d1 = (s * s.cos() - s.sin()) / (s * s);
            let d2 = (2.0 * s.sin() - 2.0 * s * s.cos() - s * s * s.sin()) / s.powi(3);
            assert!((sinc_prime(s) - d1).abs() < 1e-12);
            assert!((sinc_second(s) - d2).abs() < 1e-10);
        }
        assert!((sinc_second(0.1 - 1e-12) - sinc_second(0.1)).abs() < 1e-12);
    }
}
