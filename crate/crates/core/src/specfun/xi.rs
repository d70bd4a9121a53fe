use crate::error::{domain, Result};

/// Positive root of `e^ξ = 1 + uξ` for `u > 1`, and `0` at `u = 1`.
///
/// Safeguarded Newton on `h(ξ) = ξ − log(1 + uξ)`, whose positive root is the
/// one we want; the bracket `(0, 2·log(u+2)]` always contains it.
pub fn xi(u: f64) -> Result<f64> {
    if !(u >= 1.0) || !u.is_finite() {
        return Err(domain!("xi requires u >= 1, got {u}"));
    }
    if u == 1.0 {
        return Ok(0.0);
    }
    let d = u - 1.0;
    if d < 1e-6 {
        // (e^ξ − 1)/ξ = 1 + ξ/2 + ξ²/6 + ξ³/24 = u, inverted as a series in d.
        return Ok(2.0 * d - 4.0 / 3.0 * d * d + 10.0 / 9.0 * d * d * d);
    }
    let h = |x: f64| x - (u * x).ln_1p();
    let mut lo = 0.0f64;
    let mut hi = 2.0 * (u + 2.0).ln();
    let mut x = (u * u.ln_1p()).ln_1p().clamp(1e-300, hi);
    for _ in 0..200 {
        let hx = h(x);
        if hx > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let dh = 1.0 - u / (1.0 + u * x);
        let mut next = x - hx / dh;
        if !(next > lo && next < hi) || dh <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 * x.max(1e-300) {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Residual `e^ξ − 1 − uξ` computed without cancellation at small ξ.
pub fn xi_residual(u: f64, xi: f64) -> f64 {
    xi.exp_m1() - u * xi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(u: f64) -> f64 {
        let mut lo = 1e-300;
        let mut hi = 2.0 * (u + 2.0).ln();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid.exp_m1() / mid > u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn xi_at_one_is_zero() {
        assert_eq!(xi(1.0).unwrap(), 0.0);
    }

    #[test]
    fn xi_at_ten_matches_bisection() {
        let x = xi(10.0).unwrap();
        assert!(xi_residual(10.0, x).abs() < 1e-12 * (1.0 + 10.0 * x));
        assert!((x - bisect(10.0)).abs() < 1e-12);
    }

    #[test]
    fn xi_large_u_asymptotic() {
        let u = 1e6f64;
        let x = xi(u).unwrap();
        let approx = u.ln() + u.ln().ln();
        assert!((x - approx).abs() <= 2.0 * u.ln().ln() / u.ln());
    }

    #[test]
    fn xi_near_one() {
        for u in [1.0 + 1e-12, 1.0 + 1e-8, 1.0 + 1e-6, 1.0 + 1e-3, 1.5] {
            let x = xi(u).unwrap();
            assert!(x > 0.0);
            assert!(xi_residual(u, x).abs() <= 1e-12 * (1.0 + u * x), "u={u}");
        }
    }

    #[test]
    fn xi_rejects_small_u() {
        assert!(xi(0.5).is_err());
        assert!(xi(f64::NAN).is_err());
    }
}
