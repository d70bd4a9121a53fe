//! De Bruijn's λ_y(u) and Λ(x, y), the transform F(s, y), the K-corrected
//! asymptotic for Λ and the Buchstab identity for Λ.

use num_complex::Complex64;

use crate::error::{domain, range, resource, Result};
use crate::par;
use crate::quad;
use crate::specfun::{big_i, k_factor_real, xi, RhoTable, EULER_GAMMA};
use crate::sum::Kahan;
use crate::zeta::log_zeta_times_s_minus_1;

/// Largest `y^u` the atom sum accepts.
pub const ATOM_SUM_MAX: f64 = 1e7;
/// `lambda_xy` uses the atom sum up to this `x`, integration by parts above.
pub const AUTO_ATOM_MAX: f64 = 1e6;
/// Integer pieces integrated exactly by the integration-by-parts route;
/// beyond this `{t}` is replaced by its mean.
pub const IBP_EXACT_PIECES: f64 = 1e6;

/// Pieces per parallel work unit.
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMethod {
    AtomSum,
    IntegrationByParts,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaResult {
    pub value: f64,
    pub method: LambdaMethod,
    pub est_error: f64,
}

fn check_args(u: f64, y: f64, table: &RhoTable) -> Result<()> {
    if !(y >= 2.0) || !y.is_finite() {
        return Err(domain!("lambda needs y >= 2, got {y}"));
    }
    if !(u >= 0.0) || !u.is_finite() {
        return Err(domain!("lambda needs u >= 0, got {u}"));
    }
    if u > table.u_max() {
        return Err(range!("u = {u} beyond rho table limit {}", table.u_max()));
    }
    Ok(())
}

/// `⌊X⌋` with right-continuity at integers: a value within rounding of an
/// integer counts as that integer. Returns the floor and `{X}`.
fn floor_right(x: f64) -> (f64, f64) {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.max(1.0) {
        (r, 0.0)
    } else {
        (x.floor(), x - x.floor())
    }
}

/// Gauss–Legendre order for a piece `[n, n+1]`: the integrands carry a
/// `1/t²` factor whose relative curvature falls like `1/n`.
fn points_for(n: u64) -> usize {
    match n {
        0..=15 => 16,
        16..=255 => 10,
        256..=4095 => 6,
        _ => 4,
    }
}

/// Integrate `f` over `[a, b]`, splitting at the sorted `kinks` inside.
fn piece<F: Fn(f64) -> f64>(a: f64, b: f64, kinks: &[f64], m: usize, f: &F) -> f64 {
    let rule = quad::gl(m);
    let lo = kinks.partition_point(|&k| k <= a);
    let hi = kinks.partition_point(|&k| k < b);
    if lo >= hi {
        return rule.integrate(a, b, f);
    }
    let mut acc = 0.0;
    let mut left = a;
    for &k in &kinks[lo..hi] {
        acc += rule.integrate(left, k, f);
        left = k;
    }
    acc + rule.integrate(left, b, f)
}

/// `t_k = y^{u−k}` for `k ≥ k_min` lying in `(1, ∞)`, ascending.
fn kinks(u: f64, log_y: f64, k_min: u32) -> Vec<f64> {
    let mut out: Vec<f64> = (k_min..)
        .map(|k| u - k as f64)
        .take_while(|&e| e > 0.0)
        .map(|e| (e * log_y).exp())
        .collect();
    out.reverse();
    out
}

/// Sum `term(n)` over `n ∈ [1, n_end]`, chunked for parallelism and
/// reduced in a fixed order. Returns the sum and the sum of magnitudes.
fn sum_pieces<F>(n_end: u64, term: F) -> (f64, f64)
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    if n_end == 0 {
        return (0.0, 0.0);
    }
    let chunks = n_end.div_ceil(CHUNK) as usize;
    let parts = par::map_range(chunks, |c| {
        let lo = 1 + c as u64 * CHUNK;
        let hi = (lo + CHUNK - 1).min(n_end);
        let mut acc = Kahan::new();
        let mut mag = 0.0;
        for n in lo..=hi {
            let v = term(n);
            acc.add(v);
            mag += v.abs();
        }
        (acc.sum(), mag)
    });
    let mut acc = Kahan::new();
    let mut mag = 0.0;
    for (v, m) in parts {
        acc.add(v);
        mag += m;
    }
    (acc.sum(), mag)
}

/// `λ_y(u)` from the measure `d(⌊t⌋/t)`: atoms `1/n` at the integers
/// `n ≤ y^u` minus the density `⌊t⌋/t²`, each integer piece integrated
/// separately with further splits where `ρ` has kinks.
pub fn lambda_atom_sum(u: f64, y: f64, table: &RhoTable) -> Result<LambdaResult> {
    check_args(u, y, table)?;
    let log_y = y.ln();
    let x = (u * log_y).exp();
    if x > ATOM_SUM_MAX {
        return Err(resource!("atom sum needs y^u <= {ATOM_SUM_MAX:e}, got {x:e}"));
    }
    let (fl, frac) = floor_right(x);
    let n_max = fl as u64;
    let kinks = kinks(u, log_y, 1);
    let arg = |t: f64| u - t.ln() / log_y;
    let (sum, mag) = sum_pieces(n_max, |n| {
        let nf = n as f64;
        // n ≤ X by construction; clamp the rounding at n = X.
        let atom = table.rho_fast(arg(nf).max(0.0)) / nf;
        let b = if n < n_max { nf + 1.0 } else { nf + frac };
        let dens = if b > nf {
            piece(nf, b, &kinks, points_for(n), &|t: f64| {
                nf / (t * t) * table.rho_fast(arg(t).max(0.0))
            })
        } else {
            0.0
        };
        atom - dens
    });
    Ok(LambdaResult {
        value: sum,
        method: LambdaMethod::AtomSum,
        est_error: 8.0 * f64::EPSILON * mag + 1e-13 * sum.abs(),
    })
}

/// `λ_y(u)` after integrating by parts:
/// `ρ(u) + (1/log y)∫_1^{y^{u−1}} (−ρ'(u − log t/log y)) {t}/t² dt − {y^u}/y^u`.
///
/// Pieces up to `min(y^{u−1}, IBP_EXACT_PIECES)` are integrated exactly;
/// beyond that `{t}` is replaced by `1/2`, and the bound on what that
/// drops goes into `est_error`.
pub fn lambda_ibp(u: f64, y: f64, table: &RhoTable) -> Result<LambdaResult> {
    check_args(u, y, table)?;
    let log_y = y.ln();
    let head = table.rho_fast(u);
    let x = (u * log_y).exp();
    let mut est_error = 0.0;
    let boundary = if x > 1e15 {
        est_error += 1.0 / x;
        0.0
    } else {
        let (_, frac) = floor_right(x);
        frac / x
    };
    if u <= 1.0 {
        return Ok(LambdaResult {
            value: head - boundary,
            method: LambdaMethod::IntegrationByParts,
            est_error,
        });
    }
    let upper = ((u - 1.0) * log_y).exp();
    let cut = upper.min(IBP_EXACT_PIECES);
    let n_end = if cut <= 1.0 { 0 } else { cut.ceil() as u64 - 1 };
    let kinks = kinks(u, log_y, 2);
    let g = |t: f64| table.neg_rho_prime_fast(u - t.ln() / log_y) / (t * t);
    let (body, mag) = sum_pieces(n_end, |n| {
        let nf = n as f64;
        let b = (nf + 1.0).min(cut);
        piece(nf, b, &kinks, points_for(n), &|t: f64| (t - nf) * g(t))
    });
    let mut value = Kahan::new();
    value.add(head);
    value.add(body / log_y);
    if upper > cut {
        // ∫_{cut}^{upper} g(t)/2 dt in v = log t, split at the kinks.
        let (a, b) = (cut.ln(), upper.ln());
        let mut edges = vec![a];
        edges.extend(kinks.iter().map(|k| k.ln()).filter(|&v| v > a && v < b));
        edges.push(b);
        let mut tail = Kahan::new();
        for w in edges.windows(2) {
            let est = quad::adaptive(
                |v: f64| {
                    let t = v.exp();
                    0.5 * g(t) * t
                },
                w[0],
                w[1],
                0.0,
                1e-13,
                200,
            );
            tail.add(est.value);
            est_error += est.error / log_y;
        }
        value.add(tail.sum() / log_y);
        // Mean-value replacement of {t}: |∫ h({t} − 1/2)| ≤ (1/8)(|h(a)| + |h(b)| + ∫|h'|),
        // and h = g/log y is monotone on each kink-free stretch.
        let pieces = edges.len() as f64;
        est_error += 0.25 * pieces * g(cut) / log_y;
    }
    value.add(-boundary);
    let v = value.sum();
    est_error += 8.0 * f64::EPSILON * (head + mag / log_y) + 1e-13 * v.abs();
    Ok(LambdaResult {
        value: v,
        method: LambdaMethod::IntegrationByParts,
        est_error,
    })
}

/// `λ_y(u)`, atom sum when `y^u ≤ AUTO_ATOM_MAX`, integration by parts above.
pub fn lambda(u: f64, y: f64, table: &RhoTable) -> Result<LambdaResult> {
    check_args(u, y, table)?;
    if u * y.ln() <= AUTO_ATOM_MAX.ln() {
        lambda_atom_sum(u, y, table)
    } else {
        lambda_ibp(u, y, table)
    }
}

/// `Λ(x, y) = x λ_y(log x/log y)`; equals `⌊x⌋` for `1 ≤ x ≤ y`.
pub fn lambda_xy(x: f64, y: f64, table: &RhoTable) -> Result<f64> {
    if !(y >= 2.0) || !(x >= 1.0) || !x.is_finite() {
        return Err(domain!("Lambda(x, y) needs x >= 1, y >= 2, got x = {x}, y = {y}"));
    }
    if x <= y {
        return Ok(floor_right(x).0);
    }
    let u = x.ln() / y.ln();
    Ok(x * lambda(u, y, table)?.value)
}

/// `log F(s, y) = γ + I((1−s) log y) + log(ζ(s)(s−1)) + log log y`.
pub fn f_transform(s: Complex64, y: f64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(domain!("F(s, y) needs Re s > 0, got {s}"));
    }
    if !(y > 1.0) {
        return Err(domain!("F(s, y) needs y > 1, got {y}"));
    }
    let log_y = y.ln();
    Ok(EULER_GAMMA + big_i((1.0 - s) * log_y) + log_zeta_times_s_minus_1(s)? + log_y.ln())
}

/// `x ρ(u) K(−r(u)/log y)` and `x ρ(u) K(−ξ(u)/log y)` against `Λ(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaAsymptotic {
    pub lambda: f64,
    pub with_r: f64,
    pub with_xi: f64,
}

impl LambdaAsymptotic {
    pub fn ratio_r(&self) -> f64 {
        self.lambda / self.with_r
    }
    pub fn ratio_xi(&self) -> f64 {
        self.lambda / self.with_xi
    }
}

pub fn lambda_asymptotic(x: f64, y: f64, table: &RhoTable) -> Result<LambdaAsymptotic> {
    if !(y >= 2.0) || !(x >= y) {
        return Err(domain!("asymptotic needs x >= y >= 2, got x = {x}, y = {y}"));
    }
    let log_y = y.ln();
    let u = x.ln() / log_y;
    let base = x * table.rho(u)?;
    Ok(LambdaAsymptotic {
        lambda: lambda_xy(x, y, table)?,
        with_r: base * k_factor_real(-table.r(u)? / log_y)?,
        with_xi: base * k_factor_real(-xi(u)? / log_y)?,
    })
}

/// Quadrature used for the Buchstab integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuchstabRule {
    /// Adaptive Gauss–Kronrod to the given relative tolerance.
    Adaptive(f64),
    /// Composite trapezoid in `log t` with this many panels.
    Trapezoid(usize),
}

/// Above this many integer crossings of `x/t` the Buchstab integral is done
/// without splitting.
const BUCHSTAB_MAX_PIECES: u64 = 200_000;

/// `Λ(x,y) − [Λ(x,z) − ∫_y^z Λ(x/t, t) dt/log t]`.
pub fn buchstab_residual_lambda(x: f64, y: f64, z: f64, table: &RhoTable) -> Result<f64> {
    buchstab_residual_lambda_with(x, y, z, table, BuchstabRule::Adaptive(1e-8))
}

pub fn buchstab_residual_lambda_with(
    x: f64,
    y: f64,
    z: f64,
    table: &RhoTable,
    rule: BuchstabRule,
) -> Result<f64> {
    if !(y >= 2.0 && y <= z && z <= x) {
        return Err(domain!("Buchstab needs 2 <= y <= z <= x, got {y}, {z}, {x}"));
    }
    if z == y {
        return Ok(0.0);
    }
    // t = e^v: dt/log t = e^v dv/v.
    let f = |v: f64| -> f64 {
        let t = v.exp();
        lambda_xy(x / t, t, table).map(|l| l * t / v).unwrap_or(f64::NAN)
    };
    let (a, b) = (y.ln(), z.ln());
    let integral = match rule {
        BuchstabRule::Adaptive(tol) => {
            // Λ(x/t, t) jumps where x/t crosses an integer; integrate between
            // those points when there are not too many of them.
            let (lo, hi) = ((x / z).ceil() as u64, (x / y).floor() as u64);
            let jumps = hi.saturating_sub(lo) + 1;
            if jumps > BUCHSTAB_MAX_PIECES {
                quad::adaptive(f, a, b, 0.0, tol, 4000).value
            } else {
                let mut cuts = vec![a];
                cuts.extend((lo..=hi).rev().map(|n| (x / n as f64).ln()).filter(|v| *v > a && *v < b));
                cuts.push(b);
                let pieces = par::map_range(cuts.len() - 1, |i| {
                    quad::adaptive(&f, cuts[i], cuts[i + 1], 0.0, tol, 64).value
                });
                let mut acc = Kahan::new();
                for p in pieces {
                    acc.add(p);
                }
                acc.sum()
            }
        }
        BuchstabRule::Trapezoid(n) => {
            let n = n.max(1);
            let h = (b - a) / n as f64;
            let vals = par::map_range(n + 1, |i| f(a + h * i as f64));
            let mut acc = Kahan::new();
            for (i, v) in vals.iter().enumerate() {
                acc.add(if i == 0 || i == n { 0.5 * v } else { *v });
            }
            acc.sum() * h
        }
    };
    if integral.is_nan() {
        return Err(domain!("Buchstab integrand failed on [{y}, {z}]"));
    }
    Ok(lambda_xy(x, y, table)? - (lambda_xy(x, z, table)? - integral))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> RhoTable {
        RhoTable::build(40.0, crate::specfun::DEFAULT_STEP).unwrap()
    }

    #[test]
    fn u_one_is_floor_ratio() {
        let t = table();
        for y in [7.5f64, 100.3, 1234.567] {
            let a = lambda_atom_sum(1.0, y, &t).unwrap().value;
            assert!((a - y.floor() / y).abs() < 1e-13, "y={y}: {a}");
            let b = lambda_ibp(1.0, y, &t).unwrap().value;
            assert!((b - y.floor() / y).abs() < 1e-13, "y={y}: {b}");
        }
    }

    #[test]
    fn u_below_one() {
        let t = table();
        let (u, y) = (0.7, 1000.0f64);
        let x = (u * y.ln()).exp();
        let a = lambda_atom_sum(u, y, &t).unwrap().value;
        assert!((a - x.floor() / x).abs() < 1e-13);
    }

    #[test]
    fn methods_agree() {
        let t = table();
        for (u, y) in [(2.0, 100.0), (1.5, 1000.0), (3.3, 30.0), (2.7, 57.0)] {
            let a = lambda_atom_sum(u, y, &t).unwrap();
            let b = lambda_ibp(u, y, &t).unwrap();
            let rel = (a.value / b.value - 1.0).abs();
            assert!(rel < 1e-9, "u={u} y={y}: {} vs {} ({rel:e})", a.value, b.value);
        }
    }

    #[test]
    fn lambda_xx_is_floor() {
        let t = table();
        assert_eq!(lambda_xy(1234.5, 1234.5, &t).unwrap(), 1234.0);
    }

    #[test]
    fn f_at_one() {
        let y = 1000.0f64;
        let v = f_transform(Complex64::new(1.0, 0.0), y).unwrap();
        assert!((v.re - (EULER_GAMMA + y.ln().ln())).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn buchstab_empty_range() {
        let t = table();
        assert_eq!(buchstab_residual_lambda(1e5, 100.0, 100.0, &t).unwrap(), 0.0);
    }
}
