//! Exact counts Ψ(x, y) of y-smooth integers, the discrete Buchstab
//! identity, and the summatory function of α_y.

use std::sync::OnceLock;

use crate::error::{domain, range, resource, Result};
use crate::par;
use crate::primes::{isqrt, PrimeTable};

/// Default upper bound on `x` for exact counting.
pub const DEFAULT_MAX_X: u64 = 1_000_000_000_000;
/// Environment variable overriding [`DEFAULT_MAX_X`].
pub const MAX_X_ENV: &str = "SMOOTHBIAS_PSI_MAX_X";

/// Dense table `T[k][m] = Ψ(m, p_k)` for `m ≤ SMALL_M`, `k ≤ SMALL_K`.
const SMALL_M: usize = 1 << 20;
/// `π(√SMALL_M) = π(1024)`.
const SMALL_K: usize = 172;

/// The shared table; about 720 MB, built on first use.
fn small_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let primes: Vec<usize> = (2..=isqrt(SMALL_M as u64) as usize)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        debug_assert_eq!(primes.len(), SMALL_K);
        let width = SMALL_M + 1;
        let mut small = vec![0u32; (SMALL_K + 1) * width];
        small[1..width].fill(1);
        for (k, &p) in primes.iter().enumerate().map(|(i, p)| (i + 1, p)) {
            let (done, row) = small.split_at_mut(k * width);
            let prev = &done[(k - 1) * width..];
            for m in 0..width {
                row[m] = prev[m] + if m >= p { row[m / p] } else { 0 };
            }
        }
        small
    })
}

/// Largest `x` accepted, honouring [`MAX_X_ENV`].
pub fn max_x() -> u64 {
    std::env::var(MAX_X_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| *v >= 1.0)
        .map(|v| v as u64)
        .unwrap_or(DEFAULT_MAX_X)
}

/// Reusable exact counter; holds the primes and a small lookup table.
///
/// `Ψ(m, p_k)` is expanded as `1 + Σ_{i≤k} Ψ(m/p_i, p_i)` (split by largest
/// prime factor). Once `p_k > √m` every `n ≤ m` has at most one prime
/// factor above `√m`, so `Ψ(m, p_k) = Ψ(m, √m) + Σ_{√m<p≤p_k} ⌊m/p⌋`, and
/// that sum is grouped by the value of `⌊m/p⌋` when that is shorter.
#[derive(Debug, Clone)]
pub struct SmoothCounter {
    primes: Vec<u64>,
    limit: u64,
    small: &'static [u32],
    max_x: u64,
}

impl SmoothCounter {
    pub fn new(pt: &PrimeTable) -> Self {
        let primes: Vec<u64> = pt.primes().iter().map(|&p| p as u64).collect();
        Self {
            primes,
            limit: pt.limit(),
            small: small_table(),
            max_x: max_x(),
        }
    }

    pub fn with_max_x(mut self, max_x: u64) -> Self {
        self.max_x = max_x;
        self
    }

    pub fn max_x(&self) -> u64 {
        self.max_x
    }

    /// `Ψ(x, y)`.
    pub fn count(&self, x: u64, y: u64) -> Result<u64> {
        if x > self.max_x {
            return Err(resource!(
                "exact count for x = {x} exceeds the envelope {} (set {MAX_X_ENV} to raise it)",
                self.max_x
            ));
        }
        if x == 0 {
            return Ok(0);
        }
        if y >= x {
            return Ok(x);
        }
        if y < 2 {
            return Ok(1);
        }
        if y > self.limit {
            return Err(range!("need primes up to {y}, table stops at {}", self.limit));
        }
        let k = self.primes.partition_point(|&p| p <= y);
        Ok(self.root(x, k))
    }

    /// Top level, with the largest-prime split spread over threads.
    fn root(&self, m: u64, k: usize) -> u64 {
        let r = isqrt(m);
        if k <= 1 || self.primes[k - 1] > r || (m as usize) <= SMALL_M {
            return self.psi(m, k);
        }
        1 + par::map_range(k, |i| self.psi(m / self.primes[i], i + 1))
            .into_iter()
            .sum::<u64>()
    }

    /// `Ψ(m, p_k)`, with `p_0` standing for "no primes".
    fn psi(&self, m: u64, k: usize) -> u64 {
        if m == 0 {
            return 0;
        }
        if k == 0 {
            return 1;
        }
        if self.primes[k - 1] >= m {
            return m;
        }
        if (m as usize) <= SMALL_M && k <= SMALL_K {
            return self.small[k * (SMALL_M + 1) + m as usize] as u64;
        }
        if k == 1 {
            return 64 - m.leading_zeros() as u64;
        }
        let r = isqrt(m);
        if self.primes[k - 1] > r {
            let j = self.primes[..k].partition_point(|&p| p <= r);
            return self.psi(m, j) + self.sum_floor(m, j, k);
        }
        let mut acc = 1;
        for i in 0..k {
            acc += self.psi(m / self.primes[i], i + 1);
        }
        acc
    }

    /// `Σ_{j ≤ i < k} ⌊m/p_i⌋` (zero-based prime indices).
    fn sum_floor(&self, m: u64, j: usize, k: usize) -> u64 {
        let ps = &self.primes[j..k];
        let q_hi = m / ps[0];
        let q_lo = m / ps[ps.len() - 1];
        let values = q_hi - q_lo + 1;
        if (ps.len() as u64) <= 8 * values {
            return ps.iter().map(|&p| m / p).sum();
        }
        // Primes with ⌊m/p⌋ = q lie in (m/(q+1), m/q].
        let mut acc = 0;
        let mut end = ps.len();
        for q in q_lo..=q_hi {
            let lower = m / (q + 1);
            let start = ps[..end].partition_point(|&p| p <= lower);
            acc += q * (end - start) as u64;
            end = start;
        }
        acc
    }
}

/// `Ψ(x, y)` with a throwaway counter. Prefer [`SmoothCounter`] for many
/// queries.
pub fn psi_exact(x: u64, y: u64, pt: &PrimeTable) -> Result<u64> {
    SmoothCounter::new(pt).count(x, y)
}

/// `Ψ(x,y) − [Ψ(x,z) − Σ_{y<p≤z} Ψ(⌊x/p⌋, p)]`, which must vanish.
pub fn buchstab_residual_psi(x: u64, y: u64, z: u64, counter: &SmoothCounter) -> Result<i128> {
    if !(y <= z && z <= x) {
        return Err(domain!("Buchstab needs y <= z <= x, got {y}, {z}, {x}"));
    }
    let lo = counter.primes.partition_point(|&p| p <= y);
    let hi = counter.primes.partition_point(|&p| p <= z);
    if z > counter.limit {
        return Err(range!("need primes up to {z}, table stops at {}", counter.limit));
    }
    let mut sum: i128 = 0;
    for &p in &counter.primes[lo..hi] {
        sum += counter.count(x / p, p)? as i128;
    }
    Ok(counter.count(x, y)? as i128 - (counter.count(x, z)? as i128 - sum))
}

/// Largest `x` for [`alpha_summatory`].
pub const ALPHA_MAX_X: u64 = 10_000_000;

/// `a[K][e]`: permutations of `e` points with every cycle of length `≤ K`.
fn bounded_cycle_counts(max_e: usize) -> Vec<Vec<u128>> {
    let mut table = vec![vec![0u128; max_e + 1]; max_e + 1];
    for (kk, row) in table.iter_mut().enumerate() {
        row[0] = 1;
        for e in 1..=max_e {
            // Choose the cycle through the first point: length j uses
            // (e−1)!/(e−j)! arrangements of its other members.
            let mut falling: u128 = 1;
            let mut acc = 0u128;
            for j in 1..=kk.min(e) {
                if j > 1 {
                    falling *= (e - j + 1) as u128;
                }
                acc += falling * row[e - j];
            }
            row[e] = acc;
        }
    }
    table
}

/// `α_y(n)` for `n ≤ x` as exact integers over the common denominator
/// `Ω_max!`, where `Ω_max` bounds the number of prime factors of `n ≤ x`.
///
/// `α_y` is multiplicative with `α_y(p^e) = a_{K_p}(e)/e!`, `K_p` the
/// largest `k` with `p^k ≤ y` (zero for `p > y`): this is the exponential
/// formula applied to `exp(Σ_{k≤K_p} p^{−ks}/k)`.
pub struct AlphaTable {
    pub numerators: Vec<u128>,
    pub denominator: u128,
}

pub fn alpha_table(x: u64, y: u64) -> Result<AlphaTable> {
    if x > ALPHA_MAX_X {
        return Err(resource!("alpha summatory needs x <= {ALPHA_MAX_X}, got {x}"));
    }
    let n = x as usize;
    let omega_max = (64 - x.max(1).leading_zeros()) as usize;
    let cycles = bounded_cycle_counts(omega_max);
    let mut fact = vec![1u128; omega_max + 1];
    for i in 1..=omega_max {
        fact[i] = fact[i - 1] * i as u128;
    }
    let denominator = fact[omega_max];
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut numerators = vec![0u128; n + 1];
    for (m, slot) in numerators.iter_mut().enumerate().skip(1) {
        let mut rest = m;
        let mut value = denominator;
        while rest > 1 {
            let p = spf[rest] as u64;
            let mut e = 0;
            while rest as u64 % p == 0 {
                rest /= p as usize;
                e += 1;
            }
            if p > y {
                value = 0;
                break;
            }
            let mut k_p = 0;
            let mut pk = 1u64;
            while pk.saturating_mul(p) <= y {
                pk *= p;
                k_p += 1;
            }
            // D/e! stays integral: a product of factorials of exponents
            // summing to at most Ω_max divides Ω_max!.
            value = value / fact[e] * cycles[k_p.min(omega_max)][e];
        }
        *slot = value;
    }
    Ok(AlphaTable {
        numerators,
        denominator,
    })
}

/// `Σ_{n≤x} α_y(n)`, summed exactly and rounded once.
pub fn alpha_summatory(x: u64, y: u64) -> Result<f64> {
    let t = alpha_table(x, y)?;
    let total: u128 = t.numerators.iter().sum();
    Ok(ratio_u128(total, t.denominator))
}

/// `a/b` correctly rounded to within one ulp.
pub(crate) fn ratio_u128(a: u128, b: u128) -> f64 {
    let q = a / b;
    let r = a % b;
    q as f64 + r as f64 / b as f64
}
