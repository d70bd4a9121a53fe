//! The bias of `Ψ(x(y), y) − Λ(x(y), y)` along curves of constant saddle
//! point `β₀`: the curve `x(y)`, the normalized deviation, its zero-sum
//! model, and Monte Carlo logarithmic densities under independent phases.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::debruijn::lambda_xy;
use crate::error::{domain, range, resource, Result};
use crate::par;
use crate::smoothcount::SmoothCounter;
use crate::specfun::RhoTable;
use crate::zeta::{zero_sum, ZeroList};

/// Smallest accepted Monte Carlo sample count.
pub const MIN_SAMPLES: u64 = 1000;
/// Samples per parallel work unit.
const SAMPLE_CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct BiasConfig {
    pub beta0: f64,
    /// Zero height `T`.
    pub t_height: f64,
    pub seed: u64,
    pub n_samples: u64,
    pub y_grid: Vec<f64>,
}

impl BiasConfig {
    pub fn validate(&self) -> Result<()> {
        check_beta0(self.beta0)?;
        if self.n_samples < MIN_SAMPLES {
            return Err(domain!("need at least {MIN_SAMPLES} samples, got {}", self.n_samples));
        }
        if !(self.t_height >= 0.0) {
            return Err(domain!("zero height must be nonnegative, got {}", self.t_height));
        }
        Ok(())
    }
}

fn check_beta0(beta0: f64) -> Result<()> {
    if !(beta0 > 0.5 && beta0 < 1.0) {
        return Err(domain!("beta0 must lie in (1/2, 1), got {beta0}"));
    }
    Ok(())
}

/// Monte Carlo estimate of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub density: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub positive: u64,
}

impl DensityEstimate {
    fn from_count(positive: u64, n: u64, seed: u64) -> Self {
        let d = positive as f64 / n as f64;
        Self {
            density: d,
            stderr: (d * (1.0 - d) / n as f64).sqrt(),
            n_samples: n,
            seed,
            positive,
        }
    }
}

/// `log x(y) = (y^{1−β₀} − 1)/(1 − β₀)`.
pub fn x_of_y(y: f64, beta0: f64) -> Result<f64> {
    check_beta0(beta0)?;
    if !(y >= 1.0) {
        return Err(domain!("x(y) needs y >= 1, got {y}"));
    }
    let a = 1.0 - beta0;
    Ok((a * y.ln()).exp_m1() / a)
}

/// `1/(2β₀−1) − Σ_{0<γ≤T} 2 Re(y^{iγ}/(1/2 − β₀ + iγ))`.
pub fn model_rhs(y: f64, beta0: f64, t: f64, zeros: &ZeroList) -> Result<f64> {
    check_beta0(beta0)?;
    let zs = zero_sum(zeros, y, Complex64::new(beta0, 0.0), t)?.re;
    Ok(1.0 / (2.0 * beta0 - 1.0) - zs / y.sqrt())
}

/// One point of the bias experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub y: f64,
    pub log_x: f64,
    pub x: f64,
    pub psi: u64,
    pub lambda: f64,
    /// `(Ψ/Λ − 1) y^{β₀−1/2} log y`.
    pub value: f64,
}

/// `(Ψ(x,y) − Λ(x,y))/Λ(x,y) · y^{β₀−1/2} log y` at `x = x(y)`, from the
/// exact count and the numeric `Λ`. `Ψ` counts `n ≤ ⌊x⌋` with prime
/// factors `≤ ⌊y⌋`.
pub fn normalized_deviation(
    y: f64,
    beta0: f64,
    counter: &SmoothCounter,
    table: &RhoTable,
) -> Result<Deviation> {
    let log_x = x_of_y(y, beta0)?;
    let x = log_x.exp();
    if !(x < counter.max_x() as f64 + 1.0) {
        return Err(resource!(
            "x(y) = {x:e} at y = {y} exceeds the exact-count envelope {}",
            counter.max_x()
        ));
    }
    let psi = counter.count(x.floor() as u64, y.floor() as u64)?;
    let lambda = lambda_xy(x, y, table)?;
    Ok(Deviation {
        y,
        log_x,
        x,
        psi,
        lambda,
        value: deviation_value(psi as f64, lambda, y, beta0),
    })
}

pub fn deviation_value(psi: f64, lambda: f64, y: f64, beta0: f64) -> f64 {
    (psi / lambda - 1.0) * (beta0 - 0.5).mul_add(y.ln(), 0.0).exp() * y.ln()
}

/// Fraction of `n` samples with `c − Σ_γ 2 Re(e^{iθ_γ} w_γ) > 0` for
/// independent uniform phases `θ_γ`. Sample `j` draws from its own ChaCha
/// stream (`seed`, stream `j`), so the count is independent of scheduling.
///
/// `e^{iθ}` is drawn without trigonometry: a uniform point `z` of the unit
/// disc (by rejection) has `z²/|z|²` uniform on the circle.
pub fn race_density(constant: f64, weights: &[Complex64], n: u64, seed: u64) -> DensityEstimate {
    let w2: Vec<(f64, f64)> = weights.iter().map(|w| (2.0 * w.re, 2.0 * w.im)).collect();
    let chunks = n.div_ceil(SAMPLE_CHUNK) as usize;
    let counts = par::map_range(chunks, |c| {
        let lo = c as u64 * SAMPLE_CHUNK;
        let hi = (lo + SAMPLE_CHUNK).min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut positive = 0u64;
        for j in lo..hi {
            rng.set_stream(j);
            rng.set_word_pos(0);
            let mut x = constant;
            for &(a, b) in &w2 {
                let (cos, sin) = unit_phase(&mut rng);
                x -= a * cos - b * sin;
            }
            if x > 0.0 {
                positive += 1;
            }
        }
        positive
    });
    DensityEstimate::from_count(counts.into_iter().sum(), n, seed)
}

/// `(cos θ, sin θ)` for uniform `θ`, from 32-bit coordinates.
fn unit_phase(rng: &mut ChaCha8Rng) -> (f64, f64) {
    const SCALE: f64 = 1.0 / 2_147_483_648.0;
    loop {
        let bits = rng.next_u64();
        let u = ((bits >> 32) as f64 + 0.5) * SCALE - 1.0;
        let v = ((bits & 0xffff_ffff) as f64 + 0.5) * SCALE - 1.0;
        let r2 = u * u + v * v;
        if r2 <= 1.0 {
            let inv = 1.0 / r2;
            return ((u * u - v * v) * inv, 2.0 * u * v * inv);
        }
    }
}

/// Density of `{X > 0}` for the model `X = 1/(2β₀−1) − Σ_{0<γ≤T} 2 Re(e^{iθ_γ}/(1/2 − β₀ + iγ))`.
pub fn li_density(cfg: &BiasConfig, zeros: &ZeroList) -> Result<DensityEstimate> {
    cfg.validate()?;
    if cfg.t_height > zeros.height() {
        return Err(range!("T = {} exceeds zero list height {}", cfg.t_height, zeros.height()));
    }
    let weights: Vec<Complex64> = zeros
        .up_to(cfg.t_height)
        .iter()
        .map(|&g| 1.0 / Complex64::new(0.5 - cfg.beta0, g))
        .collect();
    Ok(race_density(1.0 / (2.0 * cfg.beta0 - 1.0), &weights, cfg.n_samples, cfg.seed))
}

/// The prime race calibration: density of `{1 − Σ 2 Re(e^{iθ_γ}/ρ) > 0}`,
/// i.e. of `Li(x) > π(x)` in the limiting distribution.
pub fn calibrate_pi_li(zeros: &ZeroList, t: f64, n: u64, seed: u64) -> Result<DensityEstimate> {
    if n < MIN_SAMPLES {
        return Err(domain!("need at least {MIN_SAMPLES} samples, got {n}"));
    }
    if t > zeros.height() {
        return Err(range!("T = {t} exceeds zero list height {}", zeros.height()));
    }
    let weights: Vec<Complex64> = zeros
        .up_to(t)
        .iter()
        .map(|&g| 1.0 / Complex64::new(0.5, g))
        .collect();
    Ok(race_density(1.0, &weights, n, seed))
}

/// Logarithmic density of `{Ψ > Λ}` over a finite `y` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    /// `∫ 1{Ψ > Λ} d log y / ∫ d log y` with each point weighted by its
    /// cell in `log y`.
    pub density: f64,
    /// Fraction of points where `sign(Ψ − Λ)` equals `sign(model_rhs)`.
    pub sign_agreement: f64,
    pub points: Vec<(Deviation, f64)>,
}

pub fn empirical_log_density(
    y_grid: &[f64],
    beta0: f64,
    t: f64,
    zeros: &ZeroList,
    counter: &SmoothCounter,
    table: &RhoTable,
) -> Result<EmpiricalDensity> {
    check_beta0(beta0)?;
    let mut ys = y_grid.to_vec();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    if ys.is_empty() {
        return Err(domain!("empty y grid"));
    }
    let rows = par::map_collect(&ys, |&y| -> Result<(Deviation, f64)> {
        Ok((
            normalized_deviation(y, beta0, counter, table)?,
            model_rhs(y, beta0, t, zeros)?,
        ))
    });
    let points = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let (density, sign_agreement) = log_density_of(&points);
    Ok(EmpiricalDensity {
        density,
        sign_agreement,
        points,
    })
}

/// Logarithmic density of `{Ψ > Λ}` and the sign-agreement rate for points
/// sorted by `y`, each carrying its `model_rhs` value.
pub fn log_density_of(points: &[(Deviation, f64)]) -> (f64, f64) {
    if points.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let logs: Vec<f64> = points.iter().map(|(d, _)| d.y.ln()).collect();
    let weight = |i: usize| -> f64 {
        if logs.len() == 1 {
            return 1.0;
        }
        let left = if i == 0 { logs[0] } else { 0.5 * (logs[i - 1] + logs[i]) };
        let right = if i + 1 == logs.len() {
            logs[i]
        } else {
            0.5 * (logs[i] + logs[i + 1])
        };
        right - left
    };
    let mut total = 0.0;
    let mut positive = 0.0;
    let mut agree = 0usize;
    for (i, (d, m)) in points.iter().enumerate() {
        let w = weight(i);
        total += w;
        let diff = d.psi as f64 - d.lambda;
        if diff > 0.0 {
            positive += w;
        }
        if (diff > 0.0) == (*m > 0.0) {
            agree += 1;
        }
    }
    (positive / total, agree as f64 / points.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_of_y_values() {
        assert!((x_of_y(1e4, 0.75).unwrap() - 36.0).abs() < 1e-12);
        assert_eq!(x_of_y(1.0, 0.75).unwrap(), 0.0);
        assert!(x_of_y(10.0, 0.5).is_err());
    }

    #[test]
    fn model_without_zeros() {
        let z = ZeroList::empty(100.0);
        assert_eq!(model_rhs(1e4, 0.75, 50.0, &z).unwrap(), 2.0);
    }

    #[test]
    fn density_without_zeros_is_one() {
        let cfg = BiasConfig {
            beta0: 0.75,
            t_height: 10.0,
            seed: 1,
            n_samples: 2000,
            y_grid: vec![],
        };
        let d = li_density(&cfg, &ZeroList::empty(10.0)).unwrap();
        assert_eq!(d.density, 1.0);
        assert_eq!(d.stderr, 0.0);
    }

    #[test]
    fn reproducible() {
        let w = [Complex64::new(0.3, -0.2), Complex64::new(0.05, 0.4)];
        let a = race_density(0.2, &w, 10_000, 7);
        let b = race_density(0.2, &w, 10_000, 7);
        assert_eq!(a, b);
        let c = race_density(0.2, &w, 10_000, 8);
        assert_ne!(a.positive, c.positive);
    }

    #[test]
    fn phases_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let (mut c, mut s, mut c2, mut q) = (0.0, 0.0, 0.0, [0usize; 4]);
        for _ in 0..n {
            let (x, y) = unit_phase(&mut rng);
            assert!((x * x + y * y - 1.0).abs() < 1e-12);
            c += x;
            s += y;
            c2 += x * x;
            q[(y.atan2(x).rem_euclid(std::f64::consts::TAU) / std::f64::consts::FRAC_PI_2) as usize % 4] += 1;
        }
        let nf = n as f64;
        assert!((c / nf).abs() < 0.01 && (s / nf).abs() < 0.01);
        assert!((c2 / nf - 0.5).abs() < 0.01);
        for k in q {
            assert!((k as f64 / nf - 0.25).abs() < 0.005);
        }
    }
}
