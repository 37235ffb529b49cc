use bwdecay_core::quad::integrate_adaptive;
use bwdecay_core::special::{
    exp_integral_e1, exp_integral_e1_scaled, exp_integral_e1_scaled_remainder, EULER_GAMMA,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// `E1(z) = e^{-z} ∫_0^∞ e^{-s}/(z + s) ds`, integrating along the horizontal
/// ray from `z` to `+∞`. Returns `e^z E1(z)` so large `|Re z|` stays finite.
fn scaled_e1_by_ray(z: Complex64) -> Complex64 {
    let mut points = vec![0.0];
    // the integrand peaks where the ray passes closest to the origin
    if z.re < 0.0 {
        let s0 = -z.re;
        for d in [-4.0, -1.0, 0.0, 1.0, 4.0] {
            let p = s0 + d * z.im.abs().max(0.05);
            if p > 0.0 {
                points.push(p);
            }
        }
    }
    let end = points.last().copied().unwrap_or(0.0) + 60.0;
    points.push(end);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    let r = integrate_adaptive(
        |s| Complex64::from_polar((-s).exp(), 0.0) / (z + s),
        &points,
        2.0,
        0.0,
        1e-13,
        100_000,
    )
    .unwrap();
    r.value
}

fn sample_points() -> Vec<Complex64> {
    let mut rng = StdRng::seed_from_u64(20_240_501);
    let mut out = Vec::new();
    for quadrant in 0..4 {
        for _ in 0..12 {
            let r = 10f64.powf(rng.gen_range(-1.3..1.7));
            let lo = quadrant as f64 * std::f64::consts::FRAC_PI_2;
            let theta = rng.gen_range(lo + 0.02..lo + std::f64::consts::FRAC_PI_2 - 0.02);
            out.push(Complex64::from_polar(r, theta));
        }
    }
    // near the cut and far out along it
    out.push(Complex64::new(-3.0, 0.2));
    out.push(Complex64::new(-25.0, -1.5));
    out
}

#[test]
fn agrees_with_ray_quadrature_in_all_quadrants() {
    let points = sample_points();
    assert_eq!(points.len(), 50);
    for z in points {
        let oracle = scaled_e1_by_ray(z);
        let g = exp_integral_e1_scaled(z).unwrap();
        assert!(rel(g, oracle) <= 1e-10, "scaled at {z}: {g} vs {oracle}");
        let e = exp_integral_e1(z).unwrap();
        let oracle_e = oracle * (-z).exp();
        assert!(rel(e, oracle_e) <= 1e-10, "unscaled at {z}: {e} vs {oracle_e}");
    }
}

#[test]
fn derivative_is_minus_exp_over_z() {
    let grid = [
        Complex64::new(0.3, 0.4),
        Complex64::new(2.0, -3.0),
        Complex64::new(-2.0, 1.0),
        Complex64::new(3.9, 0.5),
        Complex64::new(4.2, -0.5),
        Complex64::new(12.0, 30.0),
        Complex64::new(-15.0, -2.0),
        Complex64::new(0.5, -50.0),
    ];
    for z in grid {
        let h = 1e-5 * z.norm();
        let fd = (exp_integral_e1(z + h).unwrap() - exp_integral_e1(z - h).unwrap()) / (2.0 * h);
        let expected = -(-z).exp() / z;
        assert!(rel(fd, expected) <= 1e-6, "{z}: {fd} vs {expected}");
    }
}

#[test]
fn small_argument_bound() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..500 {
        let r = rng.gen_range(1e-8..0.1);
        let theta = rng.gen_range(-3.1..3.1);
        let z = Complex64::from_polar(r, theta);
        let rest = exp_integral_e1(z).unwrap() + EULER_GAMMA + z.ln();
        assert!(rest.norm() <= 2.0 * z.norm(), "{z}");
    }
}

#[test]
fn scaled_value_tends_to_inverse_argument() {
    for r in [1e3, 1e5, 1e8] {
        for theta in [0.0, 1.0, -2.5, 3.0] {
            let z = Complex64::from_polar(r, theta);
            let g = exp_integral_e1_scaled(z).unwrap();
            assert!(rel(g * z, Complex64::new(1.0, 0.0)) <= 1.5 / r, "{z}");
        }
    }
}

#[test]
fn remainder_matches_its_asymptotic_series_far_out() {
    // zG(z) - 1 + 1/z ~ Σ_{k≥2} (-1)^k k!/z^k; at |z| ≥ 500 eight terms reach 1e-17
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let r = rng.gen_range(500.0..1e5);
        let theta = rng.gen_range(-3.0..3.0);
        let z = Complex64::from_polar(r, theta);
        let mut series = Complex64::new(0.0, 0.0);
        let mut term = -z.inv();
        for k in 2..=8 {
            term = -term * k as f64 / z;
            series += term;
        }
        let got = exp_integral_e1_scaled_remainder(z).unwrap();
        assert!(rel(got, series) <= 1e-13, "{z}: {got} vs {series}");
    }
}

#[test]
fn remainder_is_consistent_with_scaled_value() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..500 {
        let z = Complex64::from_polar(rng.gen_range(0.5..60.0), rng.gen_range(-3.1..3.1));
        let direct = z * exp_integral_e1_scaled(z).unwrap() - 1.0 + z.inv();
        let got = exp_integral_e1_scaled_remainder(z).unwrap();
        // the direct form cancels by about |z|²
        let tol = 1e-13 * (1.0 + z.norm_sqr());
        assert!((got - direct).norm() <= tol * got.norm(), "{z}");
    }
}

#[test]
fn model_arguments_never_fail() {
    for beta in [0.01, 0.5, 2.0, 10.0, 100.0, 1e4] {
        for tau in [1e-8, 1e-3, 0.5, 5.0, 50.0, 700.0, 1e4, 1e6] {
            for z in [
                Complex64::new(0.5 * tau, -beta * tau),
                Complex64::new(-0.5 * tau, -beta * tau),
            ] {
                let g = exp_integral_e1_scaled(z).unwrap();
                assert!(g.re.is_finite() && g.im.is_finite(), "{z}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn schwarz_reflection(re in -10.0f64..80.0, im in -80.0f64..80.0) {
        prop_assume!(im != 0.0);
        let z = Complex64::new(re, im);
        let a = exp_integral_e1(z.conj()).unwrap();
        let b = exp_integral_e1(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * b.norm());
    }

    #[test]
    fn scaled_times_exponential_is_e1(re in -30.0f64..600.0, im in -100.0f64..100.0) {
        prop_assume!(im.abs() > 1e-9);
        let z = Complex64::new(re, im);
        let e = exp_integral_e1(z).unwrap();
        prop_assume!(e.norm() > 1e-250);
        let g = exp_integral_e1_scaled(z).unwrap();
        prop_assert!(rel(g * (-z).exp(), e) <= 1e-12);
    }
}
