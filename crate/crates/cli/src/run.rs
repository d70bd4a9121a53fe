//! Command dispatch.

use num_complex::Complex64;
use smoothbias::bias::{self, BiasConfig, Deviation};
use smoothbias::debruijn::{lambda, lambda_xy};
use smoothbias::gfactor::{g_real, g_value, psiover_rhs_at_beta, PSIOVER_MIN_BETA};
use smoothbias::primes::{sieve, PrimeTable};
use smoothbias::smoothcount::SmoothCounter;
use smoothbias::specfun::{saddle_log, RhoTable};
use smoothbias::zeta::{parse_zeros, ZeroList};

use crate::config::{Command, GridArgs, RunConfig};
use crate::fail::{CliError, CliResult};
use crate::report::{fmt_f, write_csv, write_grid, write_plot, GridRow, DENSITY_HEADER};

pub fn run(command: &Command, cfg: &RunConfig) -> CliResult<()> {
    match command {
        Command::Psi { x, y } => {
            let pt = sieve((*y).clamp(2, *x.max(&2)))?;
            let c = SmoothCounter::new(&pt);
            println!("{}", c.count(*x, *y)?);
            Ok(())
        }
        Command::Lambda { x, u, y } => {
            let table = rho_table(cfg)?;
            match (x, u) {
                (Some(x), _) => println!("{}", fmt_f(lambda_xy(*x, *y, &table)?)),
                (None, Some(u)) => {
                    let r = lambda(*u, *y, &table)?;
                    println!("{} {:?} {}", fmt_f(r.value), r.method, fmt_f(r.est_error));
                }
                (None, None) => return Err(CliError::Usage("lambda needs --x or --u".into())),
            }
            Ok(())
        }
        Command::G { beta, im, y } => {
            let pt = sieve((*y).max(2.0) as u64)?;
            let g = g_value(Complex64::new(*beta, *im), *y, &pt)?;
            println!(
                "g_factored {} {}\ng_direct {} {}\nmismatch {}",
                fmt_f(g.g_factored.re),
                fmt_f(g.g_factored.im),
                fmt_f(g.g_direct.re),
                fmt_f(g.g_direct.im),
                fmt_f(g.route_mismatch())
            );
            Ok(())
        }
        Command::VerifyTheorem1(_) => grid_command(cfg, GridMode::Theorem1),
        Command::VerifyPsiover(_) => grid_command(cfg, GridMode::Psiover),
        Command::BiasScan(_) => grid_command(cfg, GridMode::Bias),
        Command::LiDensity => {
            let (zeros, t) = zeros_for(cfg, true)?.expect("required");
            let bc = BiasConfig {
                beta0: cfg.beta0,
                t_height: t,
                seed: cfg.seed,
                n_samples: cfg.n,
                y_grid: Vec::new(),
            };
            let d = bias::li_density(&bc, &zeros)?;
            density_csv(cfg, Some(cfg.beta0), t, zeros.up_to(t).len(), d)
        }
        Command::CalibratePiLi => {
            let (zeros, t) = zeros_for(cfg, true)?.expect("required");
            let d = bias::calibrate_pi_li(&zeros, t, cfg.n, cfg.seed)?;
            density_csv(cfg, None, t, zeros.up_to(t).len(), d)
        }
    }
}

pub fn grid_args(command: &Command) -> Option<&GridArgs> {
    match command {
        Command::VerifyTheorem1(g) | Command::VerifyPsiover(g) | Command::BiasScan(g) => Some(g),
        _ => None,
    }
}

fn density_csv(
    cfg: &RunConfig,
    beta0: Option<f64>,
    t: f64,
    ordinates: usize,
    d: bias::DensityEstimate,
) -> CliResult<()> {
    let rec = vec![
        beta0.map(fmt_f).unwrap_or_default(),
        fmt_f(t),
        ordinates.to_string(),
        d.seed.to_string(),
        d.n_samples.to_string(),
        d.positive.to_string(),
        fmt_f(d.density),
        fmt_f(d.stderr),
    ];
    write_csv(cfg.output.as_deref(), &DENSITY_HEADER, &[rec])
}

fn rho_table(cfg: &RunConfig) -> CliResult<RhoTable> {
    Ok(RhoTable::build_with_order(cfg.u_max, cfg.rho_step, cfg.rho_order)?)
}

/// The zero list and the height `T` to sum to.
fn zeros_for(cfg: &RunConfig, required: bool) -> CliResult<Option<(ZeroList, f64)>> {
    let Some(path) = &cfg.zeros else {
        if required {
            return Err(CliError::Usage("this command needs --zeros <path>".into()));
        }
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let height = match cfg.zeros_height {
        Some(h) => h,
        None => text
            .lines()
            .rev()
            .find_map(|l| l.trim().parse::<f64>().ok())
            .filter(|h| h.is_finite() && *h > 0.0)
            .unwrap_or(0.0),
    };
    let mut zeros = parse_zeros(&text, height, path)?;
    let t = match cfg.ordinates {
        Some(n) => {
            zeros = zeros.first_n(n);
            zeros.height()
        }
        None => cfg.t.unwrap_or(zeros.height()),
    };
    if t > zeros.height() {
        return Err(CliError::Range(format!(
            "T = {t} exceeds the zero list height {}",
            zeros.height()
        )));
    }
    Ok(Some((zeros, t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GridMode {
    Theorem1,
    Psiover,
    Bias,
}

struct Tables {
    pt: PrimeTable,
    counter: SmoothCounter,
    rho: RhoTable,
}

fn grid_command(cfg: &RunConfig, mode: GridMode) -> CliResult<()> {
    let zeros = zeros_for(cfg, mode != GridMode::Theorem1)?;
    let along_curve = cfg.beta0_given || mode == GridMode::Bias;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &y in &cfg.grid {
        if along_curve {
            points.push((bias::x_of_y(y, cfg.beta0)?.exp(), y));
        } else {
            for &u in &cfg.u {
                points.push((y.powf(u), y));
            }
        }
    }
    let mut rows = if points.is_empty() {
        Vec::new()
    } else {
        let y_max = cfg.grid.iter().fold(2.0f64, |a, b| a.max(*b));
        let pt = sieve(y_max.max(100.0) as u64)?;
        let tables = Tables {
            counter: SmoothCounter::new(&pt),
            pt,
            rho: rho_table(cfg)?,
        };
        let results = smoothbias::par::map_collect(&points, |&(x, y)| {
            grid_row(x, y, cfg, &tables, zeros.as_ref(), mode)
        });
        results.into_iter().collect::<CliResult<Vec<_>>>()?
    };
    write_grid(cfg.output.as_deref(), &mut rows)?;
    if let Some(prefix) = &cfg.plot {
        write_plot(prefix, &rows)?;
    }
    if mode == GridMode::Bias && !rows.is_empty() {
        let pts: Vec<(Deviation, f64)> = rows
            .iter()
            .map(|r| {
                (
                    Deviation {
                        y: r.y,
                        log_x: r.x.ln(),
                        x: r.x,
                        psi: r.psi_exact,
                        lambda: r.lambda,
                        value: r.normalized_deviation.unwrap_or(f64::NAN),
                    },
                    r.model_rhs.unwrap_or(f64::NAN),
                )
            })
            .collect();
        let (density, agreement) = bias::log_density_of(&pts);
        eprintln!(
            "summary: log_density {} sign_agreement {} points {}",
            fmt_f(density),
            fmt_f(agreement),
            rows.len()
        );
    }
    Ok(())
}

fn grid_row(
    x: f64,
    y: f64,
    cfg: &RunConfig,
    t: &Tables,
    zeros: Option<&(ZeroList, f64)>,
    mode: GridMode,
) -> CliResult<GridRow> {
    if !(x >= y) {
        return Err(CliError::Domain(format!("grid point needs x >= y, got x = {x}, y = {y}")));
    }
    let sd = saddle_log(x.ln(), y.ln(), &t.rho)?;
    let psi = t.counter.count(x.floor() as u64, y.floor() as u64)?;
    let lam = lambda_xy(x, y, &t.rho)?;
    let g = g_real(sd.beta, y, &t.pt)?;
    let in_bias_range = sd.beta > 0.5 && sd.beta < 1.0;
    // Along x = x(y) the model is evaluated at β₀ itself.
    let beta_model = if cfg.beta0_given || mode == GridMode::Bias {
        cfg.beta0
    } else {
        sd.beta
    };
    let model_rhs = match zeros {
        Some((z, tt)) if in_bias_range => Some(bias::model_rhs(y, beta_model, *tt, z)?),
        _ => None,
    };
    let psiover = match zeros {
        Some((z, tt)) if mode == GridMode::Psiover && beta_model >= PSIOVER_MIN_BETA => {
            Some(psiover_rhs_at_beta(beta_model, y, *tt, z)?)
        }
        _ => None,
    };
    Ok(GridRow {
        x,
        y,
        u: sd.u,
        beta: sd.beta,
        psi_exact: psi,
        lambda: lam,
        g_beta: g,
        ratio_uncorrected: psi as f64 / lam,
        ratio_corrected: psi as f64 / (lam * g),
        model_rhs,
        normalized_deviation: in_bias_range.then(|| bias::deviation_value(psi as f64, lam, y, beta_model)),
        psiover_rhs: psiover,
    })
}
