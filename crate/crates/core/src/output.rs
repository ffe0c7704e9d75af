//! Rendering of runs into CSV or JSON text and writing them out.
//!
//! CSV output starts with a `#` header: version, derived scales, regime
//! flags, failure count and the run config as TOML between
//! [`CONFIG_BEGIN`] and [`CONFIG_END`]. Numbers use 17 significant digits.

use crate::config::{Command, OutputFormat, RunConfig};
use crate::dynamics::{
    angular_profile, field_map_with, radial_profile, Axis, ASYMPTOTIC_MIN_T, SHORT_TIME_MAX_T,
};
use crate::error::{Error, Result};
use crate::kspace::mode_amplitudes;
use crate::spectrum::spectrum;
use serde_json::json;
use std::path::PathBuf;

pub const CONFIG_BEGIN: &str = "# --- config ---";
pub const CONFIG_END: &str = "# --- end config ---";
/// Directory for outputs when the config names no path.
pub const OUTPUT_DIR_ENV: &str = "LRDD_OUTPUT_DIR";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq)]
enum Cell {
    Num(f64),
    Flag(bool),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => serde_json::Value::Null,
            Cell::Flag(b) => json!(b),
        }
    }
}

/// 17 significant digits, scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
    failures: usize,
}

/// Rendered output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub rows: usize,
    pub failures: usize,
}

/// Where a run's output went.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub destination: Option<PathBuf>,
    pub rows: usize,
    pub failures: usize,
}

fn compute(config: &RunConfig) -> Result<Table> {
    let params = &config.params;
    let mut notes = Vec::new();
    let mut failures = 0;
    let (columns, rows) = match config.command {
        Command::Kmode => {
            let kc = config.kmode.unwrap_or_default();
            let mut rows = Vec::new();
            for k in kc.k.values() {
                for alpha in kc.alpha.values() {
                    let m = mode_amplitudes(k, alpha, params)?;
                    rows.push(vec![
                        Cell::Num(params.time),
                        Cell::Num(k),
                        Cell::Num(alpha),
                        Cell::Num(m.psi.re),
                        Cell::Num(m.psi.im),
                        Cell::Num(m.phi.re),
                        Cell::Num(m.phi.im),
                        Cell::Num(m.norm_sqr()),
                    ]);
                }
            }
            (
                vec!["t", "k", "alpha", "re_psi", "im_psi", "re_phi", "im_phi", "norm"],
                rows,
            )
        }
        Command::Map => {
            let grid = config
                .grid
                .ok_or_else(|| Error::Config("map needs a grid".into()))?;
            let photon = config.photon && config.model == crate::dynamics::Model::Full;
            let map = field_map_with(&grid, params, &config.quad, config.model, photon)?;
            let mut valid = 0;
            let rows = map
                .samples
                .iter()
                .map(|s| {
                    let ok = s.ok() && s.validity.for_model(config.model);
                    valid += ok as usize;
                    if let Some(msg) = &s.failure {
                        failures += 1;
                        notes.push(format!("failed r={} theta={}: {msg}", fmt_num(s.point.r), fmt_num(s.point.theta)));
                    }
                    let mut row = vec![
                        Cell::Num(s.point.r),
                        Cell::Num(s.point.theta),
                        Cell::Num(s.psi.re),
                        Cell::Num(s.psi.im),
                        Cell::Num(s.population),
                        Cell::Num(s.err_est),
                        Cell::Flag(ok),
                    ];
                    if photon {
                        let phi = s.phi.unwrap_or(num_complex::Complex64::new(f64::NAN, f64::NAN));
                        row.push(Cell::Num(phi.re));
                        row.push(Cell::Num(phi.im));
                    }
                    row
                })
                .collect();
            notes.insert(0, format!("model: {}; valid points: {valid}/{}", config.model, map.samples.len()));
            let mut cols = vec!["r", "theta", "re_psi", "im_psi", "population", "err_est", "valid"];
            if photon {
                cols.extend(["re_phi", "im_phi"]);
            }
            (cols, rows)
        }
        Command::Radial => {
            let rc = config
                .radial
                .ok_or_else(|| Error::Config("radial needs r_max and samples".into()))?;
            let prof = radial_profile(rc.theta, rc.r_max, rc.samples, params, &config.quad)?;
            notes.push(format!("theta: {}", fmt_num(rc.theta)));
            let rows = prof
                .iter()
                .map(|s| {
                    if let Some(msg) = &s.failure {
                        failures += 1;
                        notes.push(format!("failed r={}: {msg}", fmt_num(s.r)));
                    }
                    vec![Cell::Num(s.r), Cell::Num(s.population), Cell::Num(s.err_est)]
                })
                .collect();
            (vec!["r", "population", "err_est"], rows)
        }
        Command::Angular => {
            let ac = config.angular.unwrap_or_default();
            let axis = Axis::new(0.0, std::f64::consts::PI, ac.samples)?;
            let big_t = params.scaled_time();
            let rows = axis
                .values()
                .into_iter()
                .map(|th| Ok(vec![Cell::Num(th), Cell::Num(angular_profile(th, big_t)?)]))
                .collect::<Result<Vec<_>>>()?;
            (vec!["theta", "profile"], rows)
        }
        Command::Spectrum => {
            let sc = config.spectrum.unwrap_or_default();
            let profile = config.profile.clone().unwrap_or_default().build()?;
            let pts = spectrum(sc.start, sc.end, sc.samples, &profile)?;
            notes.push(format!(
                "profile length: {}; transform table q_max: {}",
                fmt_num(profile.length),
                fmt_num(profile.table.q_max())
            ));
            let rows = pts
                .iter()
                .map(|p| vec![Cell::Num(p.delta_omega), Cell::Num(p.intensity)])
                .collect();
            (vec!["delta_omega", "intensity"], rows)
        }
    };
    Ok(Table {
        columns,
        rows,
        notes,
        failures,
    })
}

fn echo_config(config: &RunConfig) -> Result<String> {
    let mut c = config.clone();
    c.output.path = None;
    c.to_toml()
}

fn header(config: &RunConfig, table: &Table) -> Result<String> {
    let p = &config.params;
    let big_t = p.scaled_time();
    let mut h = String::new();
    h.push_str(&format!("# lrdd {VERSION}\n"));
    h.push_str(&format!("# command: {}\n", config.command.name()));
    h.push_str(&format!(
        "# U = {}, t = {}, T = {}, TU = {}\n",
        fmt_num(p.coupling),
        fmt_num(p.time),
        fmt_num(big_t),
        fmt_num(p.tu_scale())
    ));
    if config.physical.is_some() {
        h.push_str(&format!("# U derived from physical input: {}\n", fmt_num(p.coupling)));
    }
    h.push_str(&format!(
        "# validity: weak_coupling={} short_time={} asymptotic={}\n",
        p.weak_coupling(),
        big_t <= SHORT_TIME_MAX_T,
        big_t >= ASYMPTOTIC_MIN_T
    ));
    for n in &table.notes {
        h.push_str(&format!("# {n}\n"));
    }
    h.push_str(&format!("# failures: {}\n", table.failures));
    h.push_str(CONFIG_BEGIN);
    h.push('\n');
    for line in echo_config(config)?.lines() {
        if line.is_empty() {
            h.push_str("#\n");
        } else {
            h.push_str(&format!("# {line}\n"));
        }
    }
    h.push_str(CONFIG_END);
    h.push('\n');
    Ok(h)
}

fn csv_body(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::text)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn json_body(config: &RunConfig, table: &Table) -> Result<String> {
    let p = &config.params;
    let mut echo = config.clone();
    echo.output.path = None;
    let doc = json!({
        "lrdd_version": VERSION,
        "command": config.command.name(),
        "config": echo,
        "derived": {
            "scaled_time": p.scaled_time(),
            "tu_scale": p.tu_scale(),
        },
        "validity": {
            "weak_coupling": p.weak_coupling(),
            "short_time": p.scaled_time() <= SHORT_TIME_MAX_T,
            "asymptotic": p.scaled_time() >= ASYMPTOTIC_MIN_T,
        },
        "notes": table.notes,
        "failures": table.failures,
        "columns": table.columns,
        "rows": table
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Computes a run and renders it in the configured format. The config must
/// already be validated.
pub fn render(config: &RunConfig) -> Result<Rendered> {
    let table = compute(config)?;
    let text = match config.output.format {
        OutputFormat::Csv => header(config, &table)? + &csv_body(&table)?,
        OutputFormat::Json => json_body(config, &table)?,
    };
    Ok(Rendered {
        text,
        rows: table.rows.len(),
        failures: table.failures,
    })
}

/// Recovers the config echoed in a CSV header.
pub fn config_from_header(text: &str) -> Result<RunConfig> {
    let mut lines = text.lines();
    lines
        .by_ref()
        .find(|l| *l == CONFIG_BEGIN)
        .ok_or_else(|| Error::Config("no config block in header".into()))?;
    let mut toml_text = String::new();
    for l in lines {
        if l == CONFIG_END {
            return RunConfig::from_toml(&toml_text);
        }
        let body = l
            .strip_prefix("# ")
            .or_else(|| l.strip_prefix('#'))
            .ok_or_else(|| Error::Config("malformed config block".into()))?;
        toml_text.push_str(body);
        toml_text.push('\n');
    }
    Err(Error::Config("unterminated config block".into()))
}

/// Output file for `config`, or `None` for stdout.
pub fn destination(config: &RunConfig) -> Option<PathBuf> {
    match &config.output.path {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUTPUT_DIR_ENV).map(|dir| {
            let ext = match config.output.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            PathBuf::from(dir).join(format!("{}.{ext}", config.command.name()))
        }),
    }
}

/// Resolves, validates, computes and writes one run.
pub fn run(mut config: RunConfig) -> Result<RunOutcome> {
    config.resolve_physical()?;
    config.validate()?;
    let rendered = render(&config)?;
    let dest = destination(&config);
    match &dest {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, &rendered.text)?;
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(rendered.text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(RunOutcome {
        destination: dest,
        rows: rendered.rows,
        failures: rendered.failures,
    })
}
