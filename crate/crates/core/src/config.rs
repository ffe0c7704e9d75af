//! Run configuration: everything needed to reproduce one output file.
//!
//! A [`RunConfig`] serializes to TOML; the same text is echoed into the
//! header of every output file and parses back to an equal config.

use crate::dynamics::{Axis, GridSpec, Model};
use crate::error::{Error, Result};
use crate::kspace::{coupling_from_physical, SimParams};
use crate::quadrature::QuadratureSpec;
use crate::spectrum::{DensityProfile, ProfileShape};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Kmode,
    Map,
    Radial,
    Angular,
    Spectrum,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kmode => "kmode",
            Command::Map => "map",
            Command::Radial => "radial",
            Command::Angular => "angular",
            Command::Spectrum => "spectrum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output file; `-` or absent writes to stdout unless the default output
    /// directory variable is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Dipole moment, number density and transition frequency in CGS units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalInput {
    pub dipole: f64,
    pub density: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KmodeConfig {
    pub k: Axis,
    pub alpha: Axis,
}

impl Default for KmodeConfig {
    fn default() -> Self {
        Self {
            k: Axis {
                start: 0.0,
                end: 2.0,
                count: 201,
            },
            alpha: Axis {
                start: PI / 2.0,
                end: PI / 2.0,
                count: 1,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialConfig {
    #[serde(default = "half_pi")]
    pub theta: f64,
    pub r_max: f64,
    pub samples: usize,
}

fn half_pi() -> f64 {
    PI / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngularConfig {
    pub samples: usize,
}

impl Default for AngularConfig {
    fn default() -> Self {
        Self { samples: 360 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            start: -3.0,
            end: 3.0,
            samples: 600,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub length: f64,
    #[serde(flatten)]
    pub shape: ProfileShape,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            length: 4.0,
            shape: ProfileShape::Sech2,
        }
    }
}

impl ProfileConfig {
    pub fn build(&self) -> Result<DensityProfile> {
        DensityProfile::new(self.shape.clone(), self.length)
    }
}

/// Complete description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_model")]
    pub model: Model,
    /// Also compute the photon amplitude in full-model maps.
    #[serde(default)]
    pub photon: bool,
    pub params: SimParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalInput>,
    #[serde(default)]
    pub quad: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmode: Option<KmodeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<RadialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular: Option<AngularConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_model() -> Model {
    Model::Full
}

impl RunConfig {
    /// Minimal config for `command` with the given parameters.
    pub fn new(command: Command, params: SimParams) -> Self {
        Self {
            command,
            model: Model::Full,
            photon: false,
            params,
            physical: None,
            quad: QuadratureSpec::default(),
            grid: None,
            kmode: None,
            radial: None,
            angular: None,
            spectrum: None,
            profile: None,
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Derives the coupling from [`PhysicalInput`] when present.
    pub fn resolve_physical(&mut self) -> Result<()> {
        if let Some(p) = self.physical {
            self.params.coupling = coupling_from_physical(p.dipole, p.density, p.omega)?;
        }
        Ok(())
    }

    /// Checks the parts the command needs, filling defaults where one exists.
    pub fn validate(&mut self) -> Result<()> {
        SimParams::new(self.params.coupling, self.params.time)
            .map_err(|e| Error::Config(e.to_string()))?;
        self.quad.validate().map_err(|e| Error::Config(e.to_string()))?;
        match self.command {
            Command::Kmode => {
                let k = self.kmode.get_or_insert_with(KmodeConfig::default);
                k.k.validate().map_err(cfg)?;
                k.alpha.validate().map_err(cfg)?;
                if k.k.start.min(k.k.end) < 0.0 {
                    return Err(Error::Config("k must be >= 0".into()));
                }
            }
            Command::Map => {
                let g = self
                    .grid
                    .as_ref()
                    .ok_or_else(|| Error::Config("map needs a grid".into()))?;
                g.points().map_err(cfg)?;
            }
            Command::Radial => {
                let r = self
                    .radial
                    .as_ref()
                    .ok_or_else(|| Error::Config("radial needs r_max and samples".into()))?;
                if !(r.r_max > 0.0) || r.samples == 0 {
                    return Err(Error::Config("radial needs r_max > 0 and samples > 0".into()));
                }
                if !(0.0..=PI).contains(&r.theta) {
                    return Err(Error::Config("radial theta must lie in [0, pi]".into()));
                }
            }
            Command::Angular => {
                let a = self.angular.get_or_insert_with(AngularConfig::default);
                if a.samples < 2 {
                    return Err(Error::Config("angular needs at least 2 samples".into()));
                }
            }
            Command::Spectrum => {
                let s = self.spectrum.get_or_insert_with(SpectrumConfig::default);
                if s.samples < 2 || !(s.end > s.start) {
                    return Err(Error::Config("spectrum needs start < end and >= 2 samples".into()));
                }
                let p = self.profile.get_or_insert_with(ProfileConfig::default);
                if !(p.length > 0.0) {
                    return Err(Error::Config("profile length must be > 0".into()));
                }
            }
        }
        Ok(())
    }
}

fn cfg(e: Error) -> Error {
    Error::Config(e.to_string())
}

/// Parses a number that may use `pi`: `1.5`, `pi`, `-pi/2`, `2pi`, `3*pi/4`.
pub fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || Error::Config(format!("cannot parse number {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let (sign, body) = match num.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, num),
    };
    let coef = match body.strip_suffix("pi") {
        Some(c) => {
            let c = c.trim().trim_end_matches('*').trim();
            if c.is_empty() {
                PI
            } else {
                c.parse::<f64>().map_err(|_| bad())? * PI
            }
        }
        None => body.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(sign * coef / den)
}

/// Parses `lo..hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Config(format!("expected lo..hi, got {s:?}")))?;
    Ok((parse_number(a)?, parse_number(b)?))
}

/// Parses `lo..hi:count`.
pub fn parse_axis(s: &str) -> Result<Axis> {
    let (range, count) = s
        .rsplit_once(':')
        .ok_or_else(|| Error::Config(format!("expected lo..hi:count, got {s:?}")))?;
    let (lo, hi) = parse_range(range)?;
    let count = count
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("bad sample count in {s:?}")))?;
    Axis::new(lo, hi, count).map_err(cfg)
}

/// Parses `r:0..10:100 theta:0..pi:60` or `z:-5..5:50 rho:0..5:25`.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let mut axes = std::collections::BTreeMap::new();
    for tok in s.split_whitespace() {
        let (name, rest) = tok
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("expected name:lo..hi:count, got {tok:?}")))?;
        if axes.insert(name.to_string(), parse_axis(rest)?).is_some() {
            return Err(Error::Config(format!("axis {name} given twice")));
        }
    }
    let names: Vec<&str> = axes.keys().map(|k| k.as_str()).collect();
    match names.as_slice() {
        ["r", "theta"] => Ok(GridSpec::Polar {
            r: axes["r"],
            theta: axes["theta"],
        }),
        ["rho", "z"] => Ok(GridSpec::Cylindrical {
            z: axes["z"],
            rho: axes["rho"],
        }),
        _ => Err(Error::Config(format!(
            "grid needs axes r and theta, or z and rho; got {names:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_pi() {
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_number("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_number("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
        assert!(parse_number("pie").is_err());
        assert!(parse_number("1/0").is_err());
    }

    #[test]
    fn grid_strings() {
        let g = parse_grid("r:0..10:100 theta:0..pi:60").unwrap();
        match g {
            GridSpec::Polar { r, theta } => {
                assert_eq!((r.start, r.end, r.count), (0.0, 10.0, 100));
                assert_eq!((theta.end, theta.count), (PI, 60));
            }
            _ => panic!("expected polar grid"),
        }
        assert!(matches!(
            parse_grid("z:-5..5:11 rho:0..5:6").unwrap(),
            GridSpec::Cylindrical { .. }
        ));
        assert!(parse_grid("r:0..1:2").is_err());
        assert!(parse_grid("r:0..1:2 r:0..1:2").is_err());
        assert!(parse_grid("r:0..1 theta:0..1:2").is_err());
    }

    #[test]
    fn toml_roundtrip() {
        let mut c = RunConfig::new(Command::Map, SimParams::from_scaled_time(0.05, 0.01).unwrap());
        c.model = Model::ShortTime;
        c.grid = Some(parse_grid("r:0..10:5 theta:0..pi:3").unwrap());
        c.validate().unwrap();
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);

        let mut s = RunConfig::new(Command::Spectrum, SimParams::new(0.05, 0.0).unwrap());
        s.validate().unwrap();
        let text = s.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), s);
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::new(Command::Map, SimParams::new(0.05, 1.0).unwrap());
        assert!(c.validate().is_err());
        c.command = Command::Radial;
        assert!(c.validate().is_err());
        c.command = Command::Angular;
        c.validate().unwrap();
        assert_eq!(c.angular.unwrap().samples, 360);
        assert!(RunConfig::from_toml("command = \"map\"\nbogus = 1\n[params]\ncoupling = 0.1\ntime = 1.0\n").is_err());
    }

    #[test]
    fn physical_input_sets_coupling() {
        let mut c = RunConfig::new(Command::Angular, SimParams::new(0.0, 1.0).unwrap());
        c.physical = Some(PhysicalInput {
            dipole: 1e-18,
            density: 1e12,
            omega: 2e15,
        });
        c.resolve_physical().unwrap();
        let expect = coupling_from_physical(1e-18, 1e12, 2e15).unwrap();
        assert_eq!(c.params.coupling, expect);
    }
}
