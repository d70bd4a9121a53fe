//! The Riemann zeta function, a branch-tracked `log(ζ(s)(s−1))`, and
//! explicit-formula sums over tabulated zeros.

mod zeros;

pub use zeros::{load_zeros, parse_zeros, riemann_von_mangoldt, zero_sum, ZeroList};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Pieces of the Euler–Maclaurin expansion at cutoff `N`:
/// `ζ(s) = head + N^{1−s}/(s−1)`.
struct EulerMaclaurin {
    head: Complex64,
    n_pow_one_minus_s: Complex64,
}

fn euler_maclaurin(s: Complex64) -> EulerMaclaurin {
    let n_terms = (10.0 + 2.0 * s.im.abs()).ceil() as u64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        let term = (-s * (n as f64).ln()).exp();
        // Kahan compensation; the head dominates the error budget at large N.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let nf = n_terms as f64;
    let ln_n = nf.ln();
    // Computed directly so that N^{1−s} is exactly 1 at s = 1.
    let n_pow_one_minus_s = ((1.0 - s) * ln_n).exp();
    let n_pow_minus_s = n_pow_one_minus_s / nf;
    let mut head = sum + n_pow_minus_s * 0.5;
    // Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s; // s(s+1)...(s+2k-2)
    let mut fact = 2.0; // (2k)!
    let mut npow = n_pow_minus_s / nf; // N^{-s-2k+1}
    for (k, b) in BERNOULLI.iter().enumerate() {
        let kk = (k + 1) as f64;
        head += rising * npow * (b / fact);
        rising = rising * (s + 2.0 * kk - 1.0) * (s + 2.0 * kk);
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        npow /= nf * nf;
    }
    EulerMaclaurin {
        head,
        n_pow_one_minus_s,
    }
}

/// `ζ(s)` by Euler–Maclaurin summation; accurate for `Re s ∈ [−1, 4]`,
/// `|Im s| ≤ 10⁵`.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta(s) at s = 1".into()));
    }
    let em = euler_maclaurin(s);
    Ok(em.head + em.n_pow_one_minus_s / (s - 1.0))
}

pub fn riemann_zeta_real(s: f64) -> Result<f64> {
    riemann_zeta(Complex64::new(s, 0.0)).map(|z| z.re)
}

/// `ζ(s)(s−1)`, entire; equals 1 at `s = 1`.
pub fn zeta_times_s_minus_1(s: Complex64) -> Complex64 {
    let em = euler_maclaurin(s);
    em.head * (s - 1.0) + em.n_pow_one_minus_s
}

/// Closer than this to a zero of `ζ(s)(s−1)` counts as singular for the log.
const SINGULAR_MAGNITUDE: f64 = 1e-8;

/// `log(ζ(s)(s−1))` for `Re s > 0`, real on the positive real axis and
/// continued vertically from `Re s` by tracking the argument.
pub fn log_zeta_times_s_minus_1(s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(domain!("log(zeta(s)(s-1)) needs Re s > 0, got {s}"));
    }
    let flip = s.im < 0.0;
    let target = if flip { s.conj() } else { s };
    let value = zeta_times_s_minus_1(target);
    if value.norm() < SINGULAR_MAGNITUDE {
        return Err(Error::Singularity(format!(
            "zeta(s)(s-1) = {value} is too close to zero at s = {s}"
        )));
    }
    let arg = if target.im == 0.0 {
        0.0
    } else {
        tracked_argument(target)?
    };
    let out = Complex64::new(value.norm().ln(), arg);
    Ok(if flip { out.conj() } else { out })
}

fn tracked_argument(s: Complex64) -> Result<f64> {
    let mut steps = ((s.im / 0.25).ceil() as usize).max(1);
    'refine: loop {
        let mut prev = zeta_times_s_minus_1(Complex64::new(s.re, 0.0));
        let mut total = 0.0;
        for j in 1..=steps {
            let t = s.im * j as f64 / steps as f64;
            let cur = zeta_times_s_minus_1(Complex64::new(s.re, t));
            if cur.norm() < SINGULAR_MAGNITUDE {
                return Err(Error::Singularity(format!(
                    "argument path from Re s passes a zero near {}+{}i",
                    s.re, t
                )));
            }
            let delta = (cur / prev).arg();
            if delta.abs() >= std::f64::consts::FRAC_PI_2 {
                if steps > 1 << 20 {
                    return Err(Error::Singularity(format!(
                        "argument of zeta(s)(s-1) not resolvable along path to {s}"
                    )));
                }
                steps *= 2;
                continue 'refine;
            }
            total += delta;
            prev = cur;
        }
        return Ok(total);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms() {
        assert!((riemann_zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta_real(0.0).unwrap() + 0.5).abs() < 1e-14);
        assert!((riemann_zeta_real(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-13);
        assert!((riemann_zeta_real(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn pole_is_error() {
        assert!(matches!(riemann_zeta(c(1.0, 0.0)), Err(Error::Pole(_))));
        assert!((zeta_times_s_minus_1(c(1.0, 0.0)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn first_zero_is_small() {
        let z = riemann_zeta(c(0.5, 14.134_725_141_734_69)).unwrap();
        assert!(z.norm() < 1e-10, "{z}");
        let z = riemann_zeta(c(0.5, 14.134725)).unwrap();
        assert!(z.norm() < 1e-4);
    }

    #[test]
    fn zeta_half_known_value() {
        // ζ(1/2) = −1.4603545088095868...
        assert!((riemann_zeta_real(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-13);
    }

    #[test]
    fn log_branch_real_and_symmetric() {
        let l = log_zeta_times_s_minus_1(c(2.0, 0.0)).unwrap();
        assert!((l.re - (PI * PI / 6.0).ln()).abs() < 1e-14);
        assert_eq!(l.im, 0.0);
        let l = log_zeta_times_s_minus_1(c(0.75, 0.0)).unwrap();
        assert_eq!(l.im, 0.0);
        let a = log_zeta_times_s_minus_1(c(0.75, 0.5)).unwrap();
        let b = log_zeta_times_s_minus_1(c(0.75, -0.5)).unwrap();
        assert_eq!(a, b.conj());
    }

    #[test]
    fn log_exponentiates_back() {
        for s in [c(0.6, 3.0), c(0.9, 20.0), c(2.5, 40.0), c(0.3, 0.1)] {
            let l = log_zeta_times_s_minus_1(s).unwrap();
            let v = zeta_times_s_minus_1(s);
            assert!((l.exp() / v - 1.0).norm() < 1e-9, "{s}");
        }
    }

    #[test]
    fn log_domain_and_singularity() {
        assert!(log_zeta_times_s_minus_1(c(0.0, 1.0)).is_err());
        let r = log_zeta_times_s_minus_1(c(0.5, 14.134_725_141_734_69));
        assert!(matches!(r, Err(Error::Singularity(_))));
    }
}
