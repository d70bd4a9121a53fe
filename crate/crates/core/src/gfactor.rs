//! The correction factor `G(s, y) = ζ(s, y)/F(s, y) = G₁ G₂`, the corrected
//! prediction `Λ(x, y) G(β, y)` for `Ψ(x, y)`, and its zero-sum expansion.

use num_complex::Complex64;

use crate::debruijn::{f_transform, lambda_xy};
use crate::error::{domain, Result};
use crate::primes::{log_g2, partial_zeta, prime_power_sum, PrimeTable};
use crate::specfun::{saddle_log, RhoTable};
use crate::zeta::{zero_sum, ZeroList};

/// Smallest `β` accepted by [`psiover_rhs`].
pub const PSIOVER_MIN_BETA: f64 = 0.55;

fn check(s: Complex64, y: f64) -> Result<()> {
    if !(s.re > 0.0) {
        return Err(domain!("G(s, y) needs Re s > 0, got {s}"));
    }
    if !(y >= 4.0) {
        return Err(domain!("G(s, y) needs y >= 4, got {y}"));
    }
    Ok(())
}

fn real_if(s: Complex64, v: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

/// `log G₁(s, y) = Σ_{n≤y} Λ(n)/(n^s log n) − log F(s, y)`.
pub fn log_g1(s: Complex64, y: f64, pt: &PrimeTable) -> Result<Complex64> {
    check(s, y)?;
    Ok(real_if(s, prime_power_sum(pt, s, y, 0)? - f_transform(s, y)?))
}

/// Both routes to `G(s, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GBreakdown {
    pub s: Complex64,
    pub y: f64,
    pub log_g1: Complex64,
    pub log_g2: Complex64,
    /// `exp(log G₁ + log G₂)`.
    pub g_factored: Complex64,
    /// `exp(log ζ(s, y) − log F(s, y))`.
    pub g_direct: Complex64,
}

impl GBreakdown {
    pub fn route_mismatch(&self) -> f64 {
        (self.g_factored / self.g_direct - 1.0).norm()
    }
}

pub fn g_value(s: Complex64, y: f64, pt: &PrimeTable) -> Result<GBreakdown> {
    check(s, y)?;
    let log_f = f_transform(s, y)?;
    let g1 = real_if(s, prime_power_sum(pt, s, y, 0)? - log_f);
    let g2 = real_if(s, log_g2(pt, s, y)?);
    let direct = real_if(s, partial_zeta(pt, s, y)? - log_f);
    Ok(GBreakdown {
        s,
        y,
        log_g1: g1,
        log_g2: g2,
        g_factored: real_if(s, (g1 + g2).exp()),
        g_direct: real_if(s, direct.exp()),
    })
}

/// `G(β, y)` for real `β`.
pub fn g_real(beta: f64, y: f64, pt: &PrimeTable) -> Result<f64> {
    Ok(g_value(Complex64::new(beta, 0.0), y, pt)?.g_factored.re)
}

/// `Λ(x, y) G(β, y)` and its pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub u: f64,
    pub beta: f64,
    pub lambda: f64,
    pub g_beta: f64,
    pub value: f64,
}

pub fn corrected_prediction(x: f64, y: f64, pt: &PrimeTable, table: &RhoTable) -> Result<Prediction> {
    if !(y >= 4.0) || !(x >= y) {
        return Err(domain!("prediction needs x >= y >= 4, got x = {x}, y = {y}"));
    }
    let sd = saddle_log(x.ln(), y.ln(), table)?;
    let lambda = lambda_xy(x, y, table)?;
    let g_beta = g_real(sd.beta, y, pt)?;
    Ok(Prediction {
        u: sd.u,
        beta: sd.beta,
        lambda,
        g_beta,
        value: lambda * g_beta,
    })
}

/// `1 + y^{−β}/log y · (−Σ_{|ρ|≤T} y^ρ/(ρ−β) + y^{1/2}/(2β−1))` at a given `β`.
pub fn psiover_rhs_at_beta(beta: f64, y: f64, t: f64, zeros: &ZeroList) -> Result<f64> {
    if !(beta >= PSIOVER_MIN_BETA) {
        return Err(domain!(
            "beta = {beta} too close to 1/2 (need beta >= {PSIOVER_MIN_BETA})"
        ));
    }
    let zs = zero_sum(zeros, y, Complex64::new(beta, 0.0), t)?.re;
    let log_y = y.ln();
    Ok(1.0 + (-beta * log_y).exp() / log_y * (-zs + y.sqrt() / (2.0 * beta - 1.0)))
}

/// The zero-sum prediction for `Ψ(x, y)/Λ(x, y)`, with `β` from the saddle.
pub fn psiover_rhs(x: f64, y: f64, t: f64, zeros: &ZeroList, table: &RhoTable) -> Result<f64> {
    let sd = saddle_log(x.ln(), y.ln(), table)?;
    psiover_rhs_at_beta(sd.beta, y, t, zeros)
}
