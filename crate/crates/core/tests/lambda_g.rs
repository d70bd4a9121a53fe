use num_complex::Complex64;
use proptest::prelude::*;
use smoothbias::debruijn::*;
use smoothbias::gfactor::*;
use smoothbias::primes::{log_g2, log_g2_derivative, prime_power_sum, sieve, PrimeTable};
use smoothbias::specfun::{k_factor, rho_hat, RhoTable};
use smoothbias::zeta::{load_zeros, ZeroList};
use std::path::PathBuf;
use std::sync::OnceLock;

fn table() -> &'static RhoTable {
    static T: OnceLock<RhoTable> = OnceLock::new();
    T.get_or_init(RhoTable::build_default)
}

fn primes() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| sieve(200_000).unwrap())
}

fn zeros() -> &'static ZeroList {
    static Z: OnceLock<ZeroList> = OnceLock::new();
    Z.get_or_init(|| {
        let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/zeros1e4.txt");
        load_zeros(p, 1e4).unwrap()
    })
}

// ∫_0^∞ e^{−su} λ_y(u) du = (1/log y) ∫_1^∞ x^{−s/log y − 2} Λ(x, y) dx. For
// integer y every kink of Λ(·, y) sits at an integer, so Gauss–Legendre on
// unit intervals is accurate; the tail beyond `n_max` is below 1e−5.
fn laplace_lambda(s: f64, y: f64, n_max: usize) -> f64 {
    let t = table();
    let log_y = y.ln();
    let gl = smoothbias::quad::gl(4);
    let mut acc = 0.0;
    for n in 1..n_max {
        acc += gl.integrate(n as f64, n as f64 + 1.0, |x| {
            x.powf(-s / log_y - 2.0) * lambda_xy(x, y, t).unwrap()
        });
    }
    acc / log_y
}

#[test]
fn laplace_transform_of_lambda() {
    for (s, y, n) in [(0.5, 2.0, 2000), (1.0, 2.0, 2000), (1.0, 3.0, 3000)] {
        let want = (rho_hat(Complex64::new(s, 0.0)) * k_factor(Complex64::new(s / f64::ln(y), 0.0)).unwrap()).re;
        let got = laplace_lambda(s, y, n);
        assert!((got / want - 1.0).abs() < 1e-4, "s={s} y={y}: {got} vs {want}");
    }
}

#[test]
fn lambda_over_rho_envelope() {
    let t = table();
    for y in [1e3f64, 1e4] {
        for i in 0..=16 {
            let u = 2.0 + 0.5 * i as f64;
            let l = lambda(u, y, t).unwrap().value;
            let dev = (l / t.rho(u).unwrap() - 1.0).abs();
            assert!(dev <= 5.0 * (u + 1.0).ln() / y.ln(), "y={y} u={u}: {dev}");
        }
    }
}

#[test]
fn r_and_xi_variants_close() {
    let t = table();
    for y in [1e3f64, 1e4] {
        for u in [2.0, 3.0, 5.0, 8.0] {
            let a = lambda_asymptotic(y.powf(u), y, t).unwrap();
            let d = (a.with_r / a.with_xi - 1.0).abs();
            assert!(d <= 5.0 / (u * y.ln()), "y={y} u={u}: {d}");
        }
    }
}

#[test]
fn g_route_identity_grid() {
    let pt = primes();
    for y in [1e3, 1e4, 1e5] {
        for i in 0..=8 {
            let beta = 0.55 + 0.05 * i as f64;
            for im in [0.0, 0.1, -0.1] {
                let g = g_value(Complex64::new(beta, im), y, pt).unwrap();
                assert!(g.route_mismatch() <= 1e-8, "beta={beta} im={im} y={y}");
            }
        }
    }
}

#[test]
fn g_tends_to_one() {
    let pt = primes();
    let t = table();
    let mut last = f64::INFINITY;
    for y in [1e3f64, 1e4, 1e5] {
        let p = corrected_prediction(y * y, y, pt, t).unwrap();
        let d = (p.g_beta - 1.0).abs();
        assert!(d < last, "y={y}");
        last = d;
    }
    assert!(last <= 0.05, "|G-1| = {last} at y = 1e5, u = 2");
}

#[test]
fn prime_sum_derivatives() {
    let pt = primes();
    let h = 1e-5;
    for (s, y) in [(Complex64::new(0.7, 0.0), 1e4), (Complex64::new(0.6, 0.1), 1e3)] {
        let f = |z: Complex64| prime_power_sum(pt, z, y, 0).unwrap();
        let fd = (f(s + h) - f(s - h)) / (2.0 * h);
        let an = prime_power_sum(pt, s, y, 1).unwrap();
        assert!((fd / an - 1.0).norm() < 1e-6, "s={s}");
        let g = |z: Complex64| log_g2(pt, z, y).unwrap();
        let fd2 = (g(s + h) - g(s - h)) / (2.0 * h);
        let an2 = log_g2_derivative(pt, s, y, 1).unwrap();
        assert!((fd2 / an2 - 1.0).norm() < 1e-6, "s={s}");
        // And for log G₁ itself, whose derivative also carries −(log F)′.
        let lg1 = |z: Complex64| log_g1(z, y, pt).unwrap();
        let lf = |z: Complex64| f_transform(z, y).unwrap();
        let fd3 = (lg1(s + h) - lg1(s - h)) / (2.0 * h);
        let dlf = (lf(s + h) - lf(s - h)) / (2.0 * h);
        assert!((fd3 - (an - dlf)).norm() < 1e-6 * an.norm(), "s={s}");
    }
}

#[test]
fn model_is_rescaled_psiover() {
    let (beta, y, t) = (0.75, 1e4f64, 1e3);
    let p = psiover_rhs_at_beta(beta, y, t, zeros()).unwrap();
    let m = smoothbias::bias::model_rhs(y, beta, t, zeros()).unwrap();
    let rescaled = (p - 1.0) * y.ln() * y.powf(beta - 0.5);
    assert!((rescaled - m).abs() <= 1e-6 * m.abs().max(1.0), "{rescaled} vs {m}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_routes_agree(ly in 1.0f64..6.0, frac in 0.05f64..0.999) {
        // y^u ≤ 1e6 with u ≥ 1.
        let y = (ly * std::f64::consts::LN_10).exp();
        let log_max = 6.0 * std::f64::consts::LN_10;
        let u = 1.0 + frac * (log_max / y.ln() - 1.0).max(0.0);
        prop_assume!(u * y.ln() <= log_max);
        let t = table();
        let a = lambda_atom_sum(u, y, t).unwrap();
        let b = lambda_ibp(u, y, t).unwrap();
        prop_assert!(a.value > 0.0 && b.value > 0.0);
        let rel = (a.value - b.value).abs() / a.value;
        prop_assert!(rel <= 1e-6f64.max(a.est_error + b.est_error), "u={} y={}: {}", u, y, rel);
    }

    #[test]
    fn lambda_buchstab(lx in 8.0f64..12.0, c in 0.3f64..0.45, b in 0.0f64..1.0) {
        let x = lx.exp();
        let y = x.powf(c);
        let z = y * (x.sqrt() / y).powf(b);
        let t = table();
        let r = buchstab_residual_lambda(x, y, z, t).unwrap();
        prop_assert!(r.abs() <= 1e-6 * lambda_xy(x, y, t).unwrap(), "residual {}", r);
    }
}
