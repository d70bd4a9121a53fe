//! Prime tables, Chebyshev's ψ, the partial Euler product ζ(s, y) and the
//! prime-power sums that make up log G₂.

use num_complex::Complex64;

use crate::error::{domain, range, resource, Result};
use crate::par;
use crate::sum::{Kahan, KahanComplex};

/// Largest sieve limit accepted.
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Odd numbers per sieve segment (one bit each).
const SEGMENT_ODDS: u64 = 1 << 18;

/// The primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// π(x) for `x ≤ limit`.
    pub fn pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= x)
    }

    pub fn up_to(&self, x: u64) -> &[u32] {
        &self.primes[..self.pi(x)]
    }

    fn check(&self, y: f64) -> Result<u64> {
        if !(y <= self.limit as f64) {
            return Err(range!("y = {y} exceeds prime table limit {}", self.limit));
        }
        Ok(if y < 0.0 { 0 } else { y.floor() as u64 })
    }
}

/// Primes up to `limit`, by a segmented odd-only bit sieve. Segments are
/// sieved independently (in parallel with the `parallel` feature) and
/// concatenated in order, so the output does not depend on scheduling.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(resource!("sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}"));
    }
    if limit < 2 {
        return Ok(PrimeTable { limit, primes: Vec::new() });
    }
    let root = isqrt(limit);
    let base = simple_sieve(root);
    // Odd n = 2i + 1 for i in 1..=last.
    let last = (limit - 1) / 2;
    let segments = last.div_ceil(SEGMENT_ODDS) as usize;
    let chunks = par::map_range(segments, |seg| {
        let lo = 1 + seg as u64 * SEGMENT_ODDS;
        let hi = (lo + SEGMENT_ODDS).min(last + 1);
        sieve_segment(lo, hi, &base)
    });
    let mut primes = Vec::with_capacity(approx_pi(limit));
    primes.push(2);
    for c in chunks {
        primes.extend_from_slice(&c);
    }
    Ok(PrimeTable { limit, primes })
}

/// Odd indices `i` in `[lo, hi)`, standing for `2i + 1`.
fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    let len = (hi - lo) as usize;
    let mut bits = vec![0u64; len.div_ceil(64)];
    let top = 2 * (hi - 1) + 1;
    for &p in base.iter().skip(1) {
        let p = p as u64;
        if p * p > top {
            break;
        }
        // First odd multiple of p that is ≥ max(p², 2lo + 1).
        let start_n = (p * p).max((2 * lo + 1).div_ceil(p) * p);
        let start_n = if start_n % 2 == 0 { start_n + p } else { start_n };
        let mut i = (start_n - 1) / 2;
        while i < hi {
            let j = (i - lo) as usize;
            bits[j >> 6] |= 1 << (j & 63);
            i += p;
        }
    }
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut free = !word;
        while free != 0 {
            let b = free.trailing_zeros() as usize;
            let j = (w << 6) | b;
            if j >= len {
                break;
            }
            out.push((2 * (lo + j as u64) + 1) as u32);
            free &= free - 1;
        }
    }
    out
}

fn simple_sieve(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn approx_pi(n: u64) -> usize {
    let x = n as f64;
    (1.3 * x / x.ln().max(1.0)) as usize + 16
}

/// ψ(y) together with π(y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevValue {
    pub y: f64,
    pub psi: f64,
    pub pi_count: u64,
}

/// `ψ(y) = Σ_{p^k ≤ y} log p`, summed by ascending prime then ascending `k`.
pub fn chebyshev_psi(pt: &PrimeTable, y: f64) -> Result<ChebyshevValue> {
    let n = pt.check(y)?;
    let mut acc = Kahan::new();
    let primes = pt.up_to(n);
    for &p in primes {
        let p = p as u64;
        let lp = (p as f64).ln();
        let mut q = p;
        loop {
            acc.add(lp);
            match q.checked_mul(p) {
                Some(next) if next <= n => q = next,
                _ => break,
            }
        }
    }
    Ok(ChebyshevValue {
        y,
        psi: acc.sum(),
        pi_count: primes.len() as u64,
    })
}

/// `−log(1 − z)` for `|z| < 1`, by its power series when `|z|` is small so
/// that tiny factors keep full relative precision.
fn neg_log1m(z: Complex64) -> Complex64 {
    if z.norm() > 0.25 {
        return -(Complex64::new(1.0, 0.0) - z).ln();
    }
    let mut term = z;
    let mut acc = z;
    let mut k = 1.0;
    loop {
        term *= z;
        k += 1.0;
        let t = term / k;
        acc += t;
        if t.norm() <= 1e-18 * acc.norm() {
            return acc;
        }
    }
}

/// `log ζ(s, y) = Σ_{p ≤ y} −log(1 − p^{−s})`.
pub fn partial_zeta(pt: &PrimeTable, s: Complex64, y: f64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(domain!("partial zeta needs Re s > 0, got {s}"));
    }
    let n = pt.check(y)?;
    let mut acc = KahanComplex::new();
    for &p in pt.up_to(n) {
        let z = (-s * (p as f64).ln()).exp();
        acc.add(neg_log1m(z));
    }
    Ok(acc.sum())
}

/// `Σ_{p^k ≤ y} (−k log p)^i p^{−ks}/k`: for `i = 0` this is
/// `Σ_{n≤y} Λ(n)/(n^s log n)`, and higher `i` are its `s`-derivatives.
pub fn prime_power_sum(pt: &PrimeTable, s: Complex64, y: f64, i: u32) -> Result<Complex64> {
    let n = pt.check(y)?;
    let mut acc = KahanComplex::new();
    for &p in pt.up_to(n) {
        let p = p as u64;
        let lp = (p as f64).ln();
        let mut q = p;
        let mut k = 1u32;
        loop {
            let kl = k as f64 * lp;
            let w = (-kl).powi(i as i32) / k as f64;
            acc.add((-s * kl).exp() * w);
            match q.checked_mul(p) {
                Some(next) if next <= n => {
                    q = next;
                    k += 1;
                }
                _ => break,
            }
        }
    }
    Ok(acc.sum())
}

/// Relative size below which a prime's geometric tail is dropped.
const TAIL_EPS: f64 = 1e-18;

/// `log G₂(s, y) = Σ_{k≥2} Σ_{y^{1/k} < p ≤ y} p^{−ks}/k`.
///
/// Summed per prime over `k ≥ max(2, k_p)` with `k_p` the least `k` with
/// `p^k > y`; each prime's series is cut once the geometric bound on its
/// remainder, `|z|^k/(k(1−|z|))`, is negligible.
pub fn log_g2(pt: &PrimeTable, s: Complex64, y: f64) -> Result<Complex64> {
    log_g2_derivative(pt, s, y, 0)
}

/// `i`-th derivative in `s` of [`log_g2`].
pub fn log_g2_derivative(pt: &PrimeTable, s: Complex64, y: f64, i: u32) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(domain!("log G2 needs Re s > 0, got {s}"));
    }
    let n = pt.check(y)?;
    let mut acc = KahanComplex::new();
    for &p in pt.up_to(n) {
        let p = p as u64;
        let lp = (p as f64).ln();
        let mut k = 2u32;
        let mut q = p.saturating_mul(p);
        while q <= n {
            q = q.saturating_mul(p);
            k += 1;
        }
        let z = (-s * lp).exp();
        let az = z.norm();
        let mut zk = z.powu(k);
        let mut own = KahanComplex::new();
        loop {
            let kl = k as f64 * lp;
            let w = (-kl).powi(i as i32) / k as f64;
            let term = zk * w;
            own.add(term);
            let bound = zk.norm() * az * (kl + lp).powi(i as i32) / ((k + 1) as f64 * (1.0 - az));
            if bound <= TAIL_EPS * own.sum().norm().max(f64::MIN_POSITIVE) || bound == 0.0 {
                break;
            }
            zk *= z;
            k += 1;
        }
        acc.add(own.sum());
    }
    Ok(acc.sum())
}
