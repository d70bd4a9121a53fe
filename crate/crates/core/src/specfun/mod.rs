//! Dickman's ρ and its companions: ξ(u), I(s), ρ̂(s), K(t), r(u) and the
//! saddle point β.

mod expint;
mod rho;
mod xi;

pub use expint::{big_i, big_i_real};
pub use rho::{RhoTable, DEFAULT_ORDER, DEFAULT_STEP, DEFAULT_U_MAX};
pub use xi::{xi, xi_residual};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::zeta::zeta_times_s_minus_1;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// Laplace transform of ρ: `ρ̂(s) = exp(γ + I(−s))`.
pub fn rho_hat(s: Complex64) -> Complex64 {
    (EULER_GAMMA + big_i(-s)).exp()
}

/// `log ρ̂(s) = γ + I(−s)`.
pub fn log_rho_hat(s: Complex64) -> Complex64 {
    EULER_GAMMA + big_i(-s)
}

/// `K(t) = t ζ(t+1)/(t+1)`, with `K(0) = 1`.
pub fn k_factor(t: Complex64) -> Result<Complex64> {
    if t == Complex64::new(-1.0, 0.0) {
        return Err(Error::Pole("K(t) at t = -1".into()));
    }
    let v = zeta_times_s_minus_1(t + 1.0) / (t + 1.0);
    Ok(if t.im == 0.0 { Complex64::new(v.re, 0.0) } else { v })
}

pub fn k_factor_real(t: f64) -> Result<f64> {
    k_factor(Complex64::new(t, 0.0)).map(|v| v.re)
}

/// Saddle-point data for `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleData {
    pub u: f64,
    pub xi: f64,
    pub beta: f64,
    /// `−ρ'(u)/ρ(u)`, zero for `u ≤ 1`.
    pub r: f64,
}

pub fn saddle(x: f64, y: f64, table: &RhoTable) -> Result<SaddleData> {
    if !(y >= 2.0) || !(x >= y) {
        return Err(domain!("saddle needs x >= y >= 2, got x = {x}, y = {y}"));
    }
    saddle_log(x.ln(), y.ln(), table)
}

/// As [`saddle`] but from `log x` and `log y`, for `x` beyond `f64` range.
pub fn saddle_log(log_x: f64, log_y: f64, table: &RhoTable) -> Result<SaddleData> {
    if !(log_y >= 2f64.ln()) || !(log_x >= log_y) {
        return Err(domain!("saddle needs x >= y >= 2, got log x = {log_x}, log y = {log_y}"));
    }
    let u = log_x / log_y;
    let xi = xi(u)?;
    let r = table.r(u)?;
    Ok(SaddleData {
        u,
        xi,
        beta: 1.0 - xi / log_y,
        r,
    })
}
