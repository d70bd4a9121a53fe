//! Command-line flags, the optional TOML config file, and their merge.
//! Precedence: flags, then the config file, then built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::fail::{CliError, CliResult};
use crate::grid::parse_grid;

pub const DEFAULT_BETA0: f64 = 0.75;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_U: &str = "2,3";

#[derive(Debug, Parser)]
#[command(name = "smoothbias", version, about = "Smooth numbers, de Bruijn's Λ, the G(β, y) factor and zeta-zero bias models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact count Ψ(x, y) of y-smooth n ≤ x.
    Psi {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_count)]
        y: u64,
    },
    /// De Bruijn's Λ(x, y); with --u instead of --x, λ_y(u) and the method used.
    Lambda {
        #[arg(long, conflicts_with = "u", required_unless_present = "u")]
        x: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        y: f64,
    },
    /// G(s, y) at s = beta + i·im by both routes.
    G {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        im: f64,
        #[arg(long)]
        y: f64,
    },
    /// Ψ against Λ and Λ·G(β, y) over a grid.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1(GridArgs),
    /// As verify-theorem1, plus the zero-sum prediction for Ψ/Λ (needs --zeros).
    #[command(name = "verify-psiover")]
    VerifyPsiover(GridArgs),
    /// Normalized deviation along x = x(y) and its logarithmic density (needs --zeros).
    #[command(name = "bias-scan")]
    BiasScan(GridArgs),
    /// Monte Carlo density of the positivity set of the zero-sum model (needs --zeros).
    #[command(name = "li-density")]
    LiDensity,
    /// The same Monte Carlo for the π(x) versus li(x) race (needs --zeros).
    #[command(name = "calibrate-pi-li")]
    CalibratePiLi,
}

/// A nonnegative integer, also accepted in float syntax such as `1e12`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(v as u64),
        _ => Err(format!("expected a nonnegative integer, got {s:?}")),
    }
}

#[derive(Debug, Args, Clone, Default)]
pub struct GridArgs {
    /// y values: "a,b,c" or "logspace:a:b:n" (n log-spaced points from a to b).
    #[arg(long)]
    pub grid: Option<String>,
    /// u values for x = y^u, same syntax as --grid [default: 2,3]. Ignored when --beta0 is given.
    #[arg(long)]
    pub u: Option<String>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// TOML file with any of the long option names (dashes as underscores).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Zero ordinates, one per line, ascending.
    #[arg(long, global = true)]
    pub zeros: Option<PathBuf>,
    /// Height up to which the zeros file is complete [default: its last ordinate].
    #[arg(long, global = true)]
    pub zeros_height: Option<f64>,
    /// Zero-sum height T [default: the zero list height].
    #[arg(long = "t", global = true)]
    pub t: Option<f64>,
    /// Use only the first N ordinates (overrides --t).
    #[arg(long, global = true)]
    pub ordinates: Option<usize>,
    /// β₀ for x = x(y) and the bias model [default: 0.75].
    #[arg(long, global = true)]
    pub beta0: Option<f64>,
    /// Monte Carlo seed [default: 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count [default: 1000000].
    #[arg(long = "n", global = true)]
    pub n: Option<u64>,
    /// CSV destination [default: stdout].
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Write PREFIX.dat (two-column series per curve) and PREFIX.gp (gnuplot script).
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// ρ table step [default: 1/256].
    #[arg(long, global = true)]
    pub rho_step: Option<f64>,
    /// ρ table range [default: 500].
    #[arg(long, global = true)]
    pub u_max: Option<f64>,
    /// ρ interpolation order [default: 5].
    #[arg(long, global = true)]
    pub rho_order: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    zeros: Option<PathBuf>,
    zeros_height: Option<f64>,
    t: Option<f64>,
    ordinates: Option<usize>,
    beta0: Option<f64>,
    seed: Option<u64>,
    n: Option<u64>,
    output: Option<PathBuf>,
    plot: Option<PathBuf>,
    rho_step: Option<f64>,
    u_max: Option<f64>,
    rho_order: Option<usize>,
    grid: Option<String>,
    u: Option<String>,
}

/// Settings after merging; `None` means "not set anywhere and no default".
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub zeros: Option<PathBuf>,
    pub zeros_height: Option<f64>,
    pub t: Option<f64>,
    pub ordinates: Option<usize>,
    /// Whether β₀ was given explicitly (grid commands switch to x = x(y)).
    pub beta0_given: bool,
    pub beta0: f64,
    pub seed: u64,
    pub n: u64,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub rho_step: f64,
    pub u_max: f64,
    pub rho_order: usize,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
}

fn read_file_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start].matches('\n').count() + 1)
            .unwrap_or(0);
        CliError::Parse(format!("{}:{line}: {}", path.display(), e.message()))
    })
}

impl RunConfig {
    pub fn merge(common: &Common, grid: Option<&GridArgs>) -> CliResult<Self> {
        let file = match &common.config {
            Some(p) => read_file_config(p)?,
            None => FileConfig::default(),
        };
        let grid_text = grid.and_then(|g| g.grid.clone()).or(file.grid);
        let u_text = grid.and_then(|g| g.u.clone()).or(file.u);
        let beta0 = common.beta0.or(file.beta0);
        let cfg = RunConfig {
            zeros: common.zeros.clone().or(file.zeros),
            zeros_height: common.zeros_height.or(file.zeros_height),
            t: common.t.or(file.t),
            ordinates: common.ordinates.or(file.ordinates),
            beta0_given: beta0.is_some(),
            beta0: beta0.unwrap_or(DEFAULT_BETA0),
            seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            n: common.n.or(file.n).unwrap_or(DEFAULT_SAMPLES),
            output: common.output.clone().or(file.output),
            plot: common.plot.clone().or(file.plot),
            rho_step: common.rho_step.or(file.rho_step).unwrap_or(smoothbias::specfun::DEFAULT_STEP),
            u_max: common.u_max.or(file.u_max).unwrap_or(smoothbias::specfun::DEFAULT_U_MAX),
            rho_order: common.rho_order.or(file.rho_order).unwrap_or(smoothbias::specfun::DEFAULT_ORDER),
            grid: match grid_text {
                Some(g) => parse_grid(&g)?,
                None => Vec::new(),
            },
            u: parse_grid(u_text.as_deref().unwrap_or(DEFAULT_U))?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.beta0 > 0.5 && self.beta0 < 1.0) {
            return Err(CliError::Domain(format!("beta0 must lie in (1/2, 1), got {}", self.beta0)));
        }
        if let Some(t) = self.t {
            if !(t >= 0.0) {
                return Err(CliError::Domain(format!("T must be nonnegative, got {t}")));
            }
        }
        if self.grid.iter().any(|y| !(*y >= 2.0) || !y.is_finite()) {
            return Err(CliError::Domain("grid values must be finite and >= 2".into()));
        }
        if self.u.iter().any(|u| !(*u >= 1.0) || !u.is_finite()) {
            return Err(CliError::Domain("u values must be finite and >= 1".into()));
        }
        Ok(())
    }
}
