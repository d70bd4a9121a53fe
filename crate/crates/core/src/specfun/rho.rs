use crate::error::{domain, range, Result};

/// Power-series terms kept per unit interval.
const SERIES_TERMS: usize = 64;

/// Grid of `log ρ(u)` on `[0, u_max]` with piecewise Lagrange interpolation.
///
/// Values are stored in log space so the table reaches `u` in the hundreds,
/// where `ρ` is far below the smallest normal `f64`. Interpolation stencils
/// never straddle an integer, because `ρ` loses one derivative of smoothness
/// at each integer.
#[derive(Debug, Clone)]
pub struct RhoTable {
    step: f64,
    u_max: f64,
    log_rho: Vec<f64>,
    interpolation_order: usize,
    per_unit: usize,
    /// `1/Π_{m≠j}(j−m)` for the equally spaced stencil.
    inv_denom: Vec<f64>,
}

pub const DEFAULT_STEP: f64 = 1.0 / 256.0;
pub const DEFAULT_U_MAX: f64 = 500.0;
pub const DEFAULT_ORDER: usize = 5;

impl RhoTable {
    /// Build with the default interpolation order.
    pub fn build(u_max: f64, step: f64) -> Result<Self> {
        Self::build_with_order(u_max, step, DEFAULT_ORDER)
    }

    pub fn build_default() -> Self {
        Self::build(DEFAULT_U_MAX, DEFAULT_STEP).expect("default table parameters are valid")
    }

    /// `step` must be `1/n` with `n ≥ 64` so grid points land on every integer.
    pub fn build_with_order(u_max: f64, step: f64, order: usize) -> Result<Self> {
        if !(u_max >= 1.0) || !u_max.is_finite() {
            return Err(domain!("rho table needs u_max >= 1, got {u_max}"));
        }
        if !(step > 0.0 && step <= 1.0 / 64.0) {
            return Err(domain!("rho table step must be in (0, 1/64], got {step}"));
        }
        let per_unit = (1.0 / step).round() as usize;
        if ((per_unit as f64) * step - 1.0).abs() > 1e-12 {
            return Err(domain!("rho table step must be 1/n for an integer n, got {step}"));
        }
        if !(1..=8).contains(&order) || order + 1 > per_unit {
            return Err(domain!("unsupported interpolation order {order}"));
        }
        let step = 1.0 / per_unit as f64;
        let units = u_max.ceil() as usize;
        let pieces = DickmanSeries::solve(units);
        let n = units * per_unit + 1;
        let mut log_rho = Vec::with_capacity(n);
        for i in 0..n {
            let k = (i / per_unit).min(units - 1);
            let w = (i - k * per_unit) as f64 * step - 0.5;
            log_rho.push(pieces.log_eval(k, w));
        }
        // ρ ≡ 1 on [0, 1].
        for v in log_rho.iter_mut().take(per_unit + 1) {
            *v = 0.0;
        }
        Ok(Self {
            step,
            u_max: units as f64,
            log_rho,
            interpolation_order: order,
            per_unit,
            inv_denom: stencil_weights(order + 1),
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn interpolation_order(&self) -> usize {
        self.interpolation_order
    }

    /// Raw grid values; entry `i` is `log ρ(i·step)`.
    pub fn grid(&self) -> &[f64] {
        &self.log_rho
    }

    pub fn log_rho(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0 && u <= self.u_max) {
            return Err(range!("u = {u} outside rho table [0, {}]", self.u_max));
        }
        Ok(self.interpolate(u))
    }

    pub fn rho(&self, u: f64) -> Result<f64> {
        Ok(self.log_rho(u)?.exp())
    }

    /// `ρ'(u) = −ρ(u−1)/u` for `u > 1`, zero on `[0, 1]`.
    pub fn rho_prime(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0 && u <= self.u_max) {
            return Err(range!("u = {u} outside rho table [0, {}]", self.u_max));
        }
        if u <= 1.0 {
            return Ok(0.0);
        }
        Ok(-self.interpolate(u - 1.0).exp() / u)
    }

    /// `r(u) = −ρ'(u)/ρ(u) = ρ(u−1)/(u ρ(u))`, zero for `u ≤ 1`.
    pub fn r(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0 && u <= self.u_max) {
            return Err(range!("u = {u} outside rho table [0, {}]", self.u_max));
        }
        if u <= 1.0 {
            return Ok(0.0);
        }
        Ok((self.interpolate(u - 1.0) - self.interpolate(u)).exp() / u)
    }

    fn interpolate(&self, u: f64) -> f64 {
        let pos = u / self.step;
        let i = pos.round();
        if (pos - i).abs() < 1e-9 {
            return self.log_rho[i as usize];
        }
        let cell = pos.floor() as usize;
        let unit = (cell / self.per_unit).min(self.log_rho.len() / self.per_unit - 1);
        if unit == 0 {
            return 0.0;
        }
        let lo_unit = unit * self.per_unit;
        let hi_unit = lo_unit + self.per_unit;
        let npts = self.interpolation_order + 1;
        // Centre the stencil on the cell, then clamp inside [unit, unit+1].
        let mut first = (cell + 1).saturating_sub(npts / 2);
        if first < lo_unit {
            first = lo_unit;
        }
        if first + npts - 1 > hi_unit {
            first = hi_unit + 1 - npts;
        }
        // Lagrange weights as (product of all other offsets) × constant.
        let mut diff = [0.0f64; 9];
        for (m, d) in diff.iter_mut().enumerate().take(npts) {
            *d = pos - (first + m) as f64;
        }
        let mut prefix = [1.0f64; 10];
        for m in 0..npts {
            prefix[m + 1] = prefix[m] * diff[m];
        }
        let mut acc = 0.0;
        let mut suffix = 1.0;
        for j in (0..npts).rev() {
            acc += prefix[j] * suffix * self.inv_denom[j] * self.log_rho[first + j];
            suffix *= diff[j];
        }
        acc
    }

    /// `ρ(v)` for `v ≤ u_max` without range checks; zero for `v < 0`.
    #[inline]
    pub(crate) fn rho_fast(&self, v: f64) -> f64 {
        if v <= 1.0 {
            return if v < 0.0 { 0.0 } else { 1.0 };
        }
        self.interpolate(v).exp()
    }

    /// `−ρ'(v)` without range checks.
    #[inline]
    pub(crate) fn neg_rho_prime_fast(&self, v: f64) -> f64 {
        if v <= 1.0 {
            return 0.0;
        }
        self.rho_fast(v - 1.0) / v
    }
}

fn stencil_weights(npts: usize) -> Vec<f64> {
    (0..npts)
        .map(|j| {
            let mut d = 1.0;
            for m in 0..npts {
                if m != j {
                    d *= j as f64 - m as f64;
                }
            }
            1.0 / d
        })
        .collect()
}

/// Piecewise Taylor expansions of `ρ` about `k + 1/2` on each `[k, k+1]`,
/// each carrying its own log scale.
struct DickmanSeries {
    coeffs: Vec<[f64; SERIES_TERMS]>,
    log_scale: Vec<f64>,
}

impl DickmanSeries {
    fn solve(units: usize) -> Self {
        let mut coeffs = Vec::with_capacity(units);
        let mut log_scale = Vec::with_capacity(units);
        let mut first = [0.0; SERIES_TERMS];
        first[0] = 1.0;
        coeffs.push(first);
        log_scale.push(0.0);
        for k in 1..units {
            let prev = &coeffs[k - 1];
            // ρ(k) in units of the previous scale; becomes the new scale.
            let at_k: f64 = horner(prev, 0.5);
            let ratio = 1.0 / at_k;
            let centre = k as f64 + 0.5;
            let mut a = [0.0; SERIES_TERMS];
            // (centre + w) ρ_k'(w) = −ρ_{k−1}(w)
            for n in 0..SERIES_TERMS - 1 {
                let b = prev[n] * ratio;
                a[n + 1] = -(b + n as f64 * a[n]) / (centre * (n + 1) as f64);
            }
            // Fix the constant from (k+1)ρ(k+1) = ∫_k^{k+1} ρ rather than
            // from continuity at k: the integral form has no cancellation,
            // so relative errors add across pieces instead of compounding.
            let mut acc = 0.0;
            let mut p = 1.0;
            for (n, c) in a.iter().enumerate().skip(1) {
                p *= 0.5;
                let moment = if n % 2 == 0 { p / (n + 1) as f64 } else { 0.0 };
                acc += c * (moment - (k + 1) as f64 * p);
            }
            a[0] = acc / k as f64;
            log_scale.push(log_scale[k - 1] + at_k.ln());
            coeffs.push(a);
        }
        Self { coeffs, log_scale }
    }

    fn log_eval(&self, k: usize, w: f64) -> f64 {
        self.log_scale[k] + horner(&self.coeffs[k], w).ln()
    }
}

fn horner(c: &[f64; SERIES_TERMS], w: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * w + x)
}
