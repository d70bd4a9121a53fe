use num_complex::Complex64;

use crate::quad;

/// `(e^w − 1)/w`, with its removable singularity at 0 filled by the Taylor
/// series.
pub(crate) fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        // 1 + w/2 + w²/6 + ... ; eight terms reach 1e-19 for |w| < 1e-2.
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 2..=9 {
            term = term * w / k as f64;
            acc += term;
        }
        acc
    } else {
        (w.exp() - 1.0) / w
    }
}

/// `I(s) = ∫_0^s (e^v − 1)/v dv` along the straight segment from 0 to `s`.
///
/// Parametrised as `s·∫_0^1 (e^{st} − 1)/(st) dt` and integrated with adaptive
/// Gauss–Kronrod.
pub fn big_i(s: Complex64) -> Complex64 {
    if s.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if s.norm() <= 1.0 {
        return big_i_series(s);
    }
    let est = quad::adaptive(|t| exprel(s * t), 0.0, 1.0, 1e-300, 1e-14, 2000);
    s * est.value
}

/// `I(x)` for real `x`.
pub fn big_i_real(x: f64) -> f64 {
    big_i(Complex64::new(x, 0.0)).re
}

/// `Σ_{k≥1} s^k/(k·k!)`; only used where the terms do not cancel badly.
fn big_i_series(s: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..60 {
        term = term * s / k as f64;
        let add = term / k as f64;
        acc += add;
        if add.norm() < 1e-18 * acc.norm() {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_gives_zero() {
        assert_eq!(big_i(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn schwarz_reflection() {
        let s = c(3.0, 2.0);
        let a = big_i(s.conj());
        let b = big_i(s).conj();
        assert!((a - b).norm() <= 1e-14 * b.norm());
    }

    #[test]
    fn agrees_with_series_where_series_is_stable() {
        // Positive real parts: series terms are all of one sign.
        for s in [c(2.0, 0.0), c(5.0, 0.5), c(10.0, 0.0), c(1.5, 1.5)] {
            let a = big_i(s);
            let b = big_i_series(s);
            assert!((a - b).norm() <= 1e-12 * b.norm(), "{s}");
        }
    }

    #[test]
    fn negative_real_axis_matches_exponential_integral() {
        // I(-x) = -(E1(x) + ln x + γ); E1(50) ≈ 3.78e-24 is negligible.
        let x = 50.0f64;
        let want = -(x.ln() + crate::specfun::EULER_GAMMA);
        assert!((big_i_real(-x) - want).abs() < 1e-12);
    }

    #[test]
    fn splitting_at_midpoint_is_additive() {
        // I(s) = I(s/2) + ∫_{s/2}^{s} (e^v − 1)/v dv
        let s = c(-20.0, 30.0);
        let half = s / 2.0;
        let tail = crate::quad::adaptive(
            |t| {
                let v = half + half * t;
                (v.exp() - 1.0) / v * half
            },
            0.0,
            1.0,
            1e-300,
            1e-15,
            2000,
        )
        .value;
        let whole = big_i(s);
        assert!((big_i(half) + tail - whole).norm() <= 1e-12 * whole.norm());
    }
}
