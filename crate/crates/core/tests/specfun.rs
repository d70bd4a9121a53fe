use num_complex::Complex64;
use proptest::prelude::*;
use smoothbias::specfun::*;
use std::sync::OnceLock;

fn table() -> &'static RhoTable {
    static T: OnceLock<RhoTable> = OnceLock::new();
    T.get_or_init(RhoTable::build_default)
}

// Li₂(x) for x ≤ 0 via Li₂(x) = −Li₂(x/(x−1)) − ½ log²(1−x).
fn dilog_neg(x: f64) -> f64 {
    let z = x / (x - 1.0);
    let mut s = 0.0;
    let mut zk = z;
    for k in 1..200 {
        s += zk / (k * k) as f64;
        zk *= z;
    }
    -s - 0.5 * (1.0 - x).ln().powi(2)
}

#[test]
fn rho_closed_forms() {
    let t = table();
    for i in 0..=200 {
        let u = 1.0 + i as f64 / 200.0;
        assert!((t.rho(u).unwrap() - (1.0 - u.ln())).abs() < 1e-10, "u={u}");
    }
    let pi2 = std::f64::consts::PI.powi(2);
    for i in 0..=100 {
        let u = 2.0 + i as f64 / 100.0;
        let want = 1.0 - (1.0 - (u - 1.0).ln()) * u.ln() + dilog_neg(1.0 - u) + pi2 / 12.0;
        let got = t.rho(u).unwrap();
        assert!((got / want - 1.0).abs() < 1e-10, "u={u}: {got} vs {want}");
    }
}

#[test]
fn rho_dde_residual_by_finite_differences() {
    let t = table();
    let h = t.step() / 2.0;
    for (i, _) in t.grid().iter().enumerate() {
        let u = i as f64 * t.step();
        if u < 1.0 || u > 30.0 || (u - u.round()).abs() < 2.5 * h {
            continue;
        }
        let f = |v: f64| t.rho(v).unwrap();
        let d = (f(u - 2.0 * h) - 8.0 * f(u - h) + 8.0 * f(u + h) - f(u + 2.0 * h)) / (12.0 * h);
        let prev = f(u - 1.0);
        assert!((u * d + prev).abs() <= 1e-9 * prev, "u={u}: {}", (u * d + prev).abs() / prev);
    }
}

#[test]
fn integral_form_at_grid_points() {
    let t = table();
    let gl = smoothbias::quad::gl(20);
    for u in [1.5f64, 2.5, 3.25, 7.75, 15.5, 40.5] {
        let mut acc = 0.0;
        // Split at the integer inside (u−1, u).
        let k = u.floor();
        for (a, b) in [(u - 1.0, k), (k, u)] {
            acc += gl.integrate(a, b, |v| t.rho(v).unwrap());
        }
        let want = t.rho(u).unwrap();
        assert!((acc / u / want - 1.0).abs() < 1e-9, "u={u}");
    }
}

fn laplace_rho(s: Complex64) -> Complex64 {
    let t = table();
    let gl = smoothbias::quad::gl(24);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..60 {
        acc += gl.integrate(k as f64, k as f64 + 1.0, |v| (-s * v).exp() * t.rho(v).unwrap());
    }
    acc
}

#[test]
fn rho_hat_is_the_laplace_transform() {
    // ρ(60) < 1e-100, so truncation at 60 is invisible at this tolerance.
    assert!(table().rho(60.0).unwrap() < 1e-100);
    for s in [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 1.0),
    ] {
        let num = laplace_rho(s);
        let got = rho_hat(s);
        assert!((got / num - 1.0).norm() < 1e-6, "s={s}: {got} vs {num}");
    }
    assert!((rho_hat(Complex64::new(0.0, 0.0)).re - EULER_GAMMA.exp()).abs() < 1e-8);
}

#[test]
fn k_factor_basics() {
    assert!((k_factor_real(0.0).unwrap() - 1.0).abs() < 1e-14);
    // K(1) = ζ(2)/2.
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((k_factor_real(1.0).unwrap() - z2 / 2.0).abs() < 1e-13);
    assert!(k_factor(Complex64::new(-1.0, 0.0)).is_err());
}

#[test]
fn saddle_round_trip_through_bias_curve() {
    let t = table();
    let log_x = smoothbias::bias::x_of_y(1e4, 0.75).unwrap();
    let sd = saddle_log(log_x, 1e4f64.ln(), t).unwrap();
    assert!((sd.beta - 0.75).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn xi_solves_its_equation(lu in 0.0f64..(1e6f64).ln()) {
        let u = lu.exp();
        let x = xi(u).unwrap();
        prop_assert!(x >= 0.0);
        prop_assert!(xi_residual(u, x).abs() <= 1e-12 * (1.0 + u * x));
    }

    #[test]
    fn big_i_reflection_and_path_additivity(re in -20.0f64..20.0, im in -20.0f64..20.0) {
        let s = Complex64::new(re, im);
        let a = big_i(s);
        prop_assert!((big_i(s.conj()) - a.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        // I(s) = I(s/2) + ∫_{s/2}^{s} (e^t − 1)/t dt.
        let gl = smoothbias::quad::gl(32);
        let h = s / 2.0;
        let tail = gl.integrate(0.0, 1.0, |w| {
            let z = h + h * w;
            if z.norm() < 1e-300 { h } else { (z.exp() - 1.0) / z * h }
        });
        let b = big_i(h) + tail;
        prop_assert!((a - b).norm() <= 1e-11 * (1.0 + a.norm()), "{a} vs {b}");
    }

    #[test]
    fn k_factor_conjugate_symmetry(re in -0.95f64..3.0, im in -30.0f64..30.0) {
        let t = Complex64::new(re, im);
        let a = k_factor(t).unwrap();
        let b = k_factor(t.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn rho_decreasing(u in 1.0f64..200.0, d in 0.001f64..1.0) {
        let t = table();
        prop_assert!(t.log_rho(u + d).unwrap() < t.log_rho(u).unwrap());
    }
}
