use clap::{Args, Parser, Subcommand, ValueEnum};
use lrdd::config::{
    parse_axis, parse_grid, parse_number, parse_range, AngularConfig, Command, KmodeConfig,
    OutputFormat, PhysicalInput, ProfileConfig, RadialConfig, RunConfig, SpectrumConfig,
};
use lrdd::{Error, Model, ProfileShape, QuadratureSpec, SimParams};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit status when some rows failed but output was written.
const EXIT_PARTIAL: u8 = 3;
const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 1;

/// Real-space excitation redistribution and emission spectra of a polarized
/// two-level medium. All quantities are in natural units (omega = c = hbar = 1).
#[derive(Parser)]
#[command(name = "lrdd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact single-mode amplitudes over a (k, alpha) grid.
    Kmode {
        #[command(flatten)]
        common: Common,
        /// k axis as lo..hi:count.
        #[arg(long, default_value = "0..2:201")]
        k: String,
        /// alpha axis as lo..hi:count.
        #[arg(long, default_value = "pi/2..pi/2:1")]
        alpha: String,
    },
    /// Population map on an (r, theta) or (z, rho) grid.
    Map {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModelArg::Full)]
        model: ModelArg,
        /// Grid, e.g. "r:0..10:100 theta:0..pi:60" or "z:-5..5:50 rho:0..5:25".
        #[arg(long, num_args = 1.., required = true)]
        grid: Vec<String>,
        /// Also compute the photon amplitude (full model only).
        #[arg(long)]
        photon: bool,
    },
    /// Population along a ray from the origin (full model).
    Radial {
        #[command(flatten)]
        common: Common,
        /// Ray angle from the polarization axis.
        #[arg(long, default_value = "pi/2")]
        theta: String,
        #[arg(long)]
        r_max: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Long-time angular profile over theta in [0, pi].
    Angular {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 360)]
        samples: usize,
    },
    /// Closed-form emission spectrum of a finite cloud.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Cloud size.
        #[arg(long = "L", default_value = "4")]
        length: String,
        /// Density profile shape.
        #[arg(long, value_enum, default_value_t = ShapeArg::Sech2)]
        shape: ShapeArg,
        /// Frequency deviation range as lo..hi.
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 600)]
        samples: usize,
    },
    /// Run a TOML config file.
    Run {
        config: PathBuf,
        /// Override the output path from the config.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Coupling U.
    #[arg(long = "U")]
    coupling: Option<String>,
    /// Scaled time T = t U^2.
    #[arg(long = "T")]
    scaled_time: Option<String>,
    /// Time t in units of 1/omega.
    #[arg(long = "t")]
    time: Option<String>,
    /// Derive U from dipole moment, density and frequency (CGS): d,n,omega.
    #[arg(long)]
    physical: Option<String>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Output file; "-" for stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Full,
    #[value(name = "short_time")]
    ShortTime,
    Asymptotic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Sech2,
    Gaussian,
}

/// Coupling used when only the scaled time matters.
const DEFAULT_COUPLING: f64 = 0.01;

fn build_params(c: &Common, physical: Option<PhysicalInput>) -> Result<SimParams, Error> {
    let coupling = match (physical, &c.coupling) {
        (Some(p), _) => lrdd::coupling_from_physical(p.dipole, p.density, p.omega)?,
        (None, Some(u)) => parse_number(u)?,
        (None, None) => DEFAULT_COUPLING,
    };
    match (&c.scaled_time, &c.time) {
        (Some(_), Some(_)) => Err(Error::Config("give either --T or --t, not both".into())),
        (Some(big_t), None) => SimParams::from_scaled_time(coupling, parse_number(big_t)?),
        (None, Some(t)) => SimParams::new(coupling, parse_number(t)?),
        (None, None) => SimParams::new(coupling, 0.0),
    }
}

fn parse_physical(s: &str) -> Result<PhysicalInput, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("--physical expects d,n,omega, got {s:?}")));
    }
    Ok(PhysicalInput {
        dipole: parse_number(parts[0])?,
        density: parse_number(parts[1])?,
        omega: parse_number(parts[2])?,
    })
}

fn base_config(command: Command, c: &Common) -> Result<RunConfig, Error> {
    let physical = c.physical.as_deref().map(parse_physical).transpose()?;
    let mut cfg = RunConfig::new(command, build_params(c, physical)?);
    cfg.physical = physical;
    let mut quad = QuadratureSpec::default();
    if let Some(v) = c.rel_tol {
        quad.rel_tol = v;
    }
    if let Some(v) = c.abs_tol {
        quad.abs_tol = v;
    }
    cfg.quad = quad;
    cfg.output.path = c.output.clone();
    cfg.output.format = match c.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    Ok(cfg)
}

fn config_from_cli(sub: Sub) -> Result<RunConfig, Error> {
    Ok(match sub {
        Sub::Kmode { common, k, alpha } => {
            let mut cfg = base_config(Command::Kmode, &common)?;
            cfg.kmode = Some(KmodeConfig {
                k: parse_axis(&k)?,
                alpha: parse_axis(&alpha)?,
            });
            cfg
        }
        Sub::Map {
            common,
            model,
            grid,
            photon,
        } => {
            let mut cfg = base_config(Command::Map, &common)?;
            cfg.model = match model {
                ModelArg::Full => Model::Full,
                ModelArg::ShortTime => Model::ShortTime,
                ModelArg::Asymptotic => Model::Asymptotic,
            };
            cfg.grid = Some(parse_grid(&grid.join(" "))?);
            cfg.photon = photon;
            cfg
        }
        Sub::Radial {
            common,
            theta,
            r_max,
            samples,
        } => {
            let mut cfg = base_config(Command::Radial, &common)?;
            cfg.radial = Some(RadialConfig {
                theta: parse_number(&theta)?,
                r_max: parse_number(&r_max)?,
                samples,
            });
            cfg
        }
        Sub::Angular { common, samples } => {
            let mut cfg = base_config(Command::Angular, &common)?;
            cfg.angular = Some(AngularConfig { samples });
            cfg
        }
        Sub::Spectrum {
            common,
            length,
            shape,
            range,
            samples,
        } => {
            let mut cfg = base_config(Command::Spectrum, &common)?;
            let (start, end) = parse_range(&range)?;
            cfg.spectrum = Some(SpectrumConfig {
                start,
                end,
                samples,
            });
            cfg.profile = Some(ProfileConfig {
                length: parse_number(&length)?,
                shape: match shape {
                    ShapeArg::Sech2 => ProfileShape::Sech2,
                    ShapeArg::Gaussian => ProfileShape::Gaussian,
                },
            });
            cfg
        }
        Sub::Run { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = RunConfig::from_toml(&text)?;
            if output.is_some() {
                cfg.output.path = output;
            }
            cfg
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config_from_cli(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("lrdd: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match lrdd::run(cfg) {
        Ok(outcome) => {
            if let Some(p) = &outcome.destination {
                eprintln!("lrdd: wrote {} rows to {}", outcome.rows, p.display());
            }
            if outcome.failures > 0 {
                eprintln!("lrdd: {} rows failed; see the output header", outcome.failures);
                ExitCode::from(EXIT_PARTIAL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e @ (Error::Config(_) | Error::Domain(_))) => {
            eprintln!("lrdd: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("lrdd: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
