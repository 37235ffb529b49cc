//! Exponential integral `E1(z)` on the principal branch, and the scaled
//! variant `e^z E1(z)` that stays O(1/z) where `e^z` alone would overflow.
//!
//! Two expansions are used:
//!
//! * the power series `-γ - ln z - Σ (-z)^k / (k·k!)` near the origin and in
//!   the sector hugging the negative real axis (where the terms do not cancel);
//! * the modified Lentz evaluation of the continued fraction
//!   `e^z E1(z) = 1/(z+1- 1/(z+3- 4/(z+5- ...)))` everywhere else.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Radius inside which the power series is always used.
pub const SERIES_RADIUS: f64 = 4.0;
/// Largest radius at which the series is used in the sector `|Re z| > 2|Im z|`, `Re z < 0`.
pub const SERIES_SECTOR_RADIUS: f64 = 40.0;

pub const MAX_SERIES_TERMS: usize = 200;
pub const MAX_FRACTION_ITERATIONS: usize = 500;

const FRACTION_TOLERANCE: f64 = 3.0e-16;
const TINY: f64 = 1.0e-300;

/// Which expansion [`exp_integral_e1`] selects for a given argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    PowerSeries,
    ContinuedFraction,
}

pub fn expansion_for(z: Complex64) -> Expansion {
    let r = z.norm();
    if r <= SERIES_RADIUS
        || (z.re < 0.0 && z.re.abs() > 2.0 * z.im.abs() && r <= SERIES_SECTOR_RADIUS)
    {
        Expansion::PowerSeries
    } else {
        Expansion::ContinuedFraction
    }
}

fn check_argument(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("E1 argument is not finite: {z}")));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain("E1 diverges logarithmically at z = 0"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::domain(format!(
            "E1 argument {z} lies on the branch cut (negative real axis)"
        )));
    }
    Ok(())
}

/// Exponential integral `E1(z) = ∫_z^∞ e^{-u}/u du`, principal branch.
pub fn exp_integral_e1(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    match expansion_for(z) {
        Expansion::PowerSeries => e1_series(z),
        Expansion::ContinuedFraction => Ok((-z).exp() * scaled_fraction(z)?),
    }
}

/// `G(z) = e^z E1(z)`. In the continued-fraction region `e^z` is never formed.
pub fn exp_integral_e1_scaled(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    match expansion_for(z) {
        Expansion::PowerSeries => Ok(z.exp() * e1_series(z)?),
        Expansion::ContinuedFraction => scaled_fraction(z),
    }
}

fn e1_series(z: Complex64) -> Result<Complex64> {
    let minus_z = -z;
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        power = power * minus_z / kf;
        let term = power / kf;
        sum += term;
        if term.norm() <= 0.5 * f64::EPSILON * sum.norm() {
            return Ok(-EULER_GAMMA - z.ln() - sum);
        }
    }
    Err(Error::Convergence {
        method: "E1 power series",
        iterations: MAX_SERIES_TERMS,
    })
}

/// `zG(z) - 1 + 1/z`, which behaves like `2/z²` for large `|z|`. In the
/// continued-fraction region it is formed from the tail of the fraction, so
/// it keeps full relative precision where `zG - 1` has cancelled away.
pub fn exp_integral_e1_scaled_remainder(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    match expansion_for(z) {
        Expansion::PowerSeries => Ok(z * z.exp() * e1_series(z)? - 1.0 + z.inv()),
        Expansion::ContinuedFraction => {
            let t = fraction_tail(z)?;
            Ok((1.0 + (z - 1.0) * t) / (z * (z + 1.0 - t)))
        }
    }
}

fn scaled_fraction(z: Complex64) -> Result<Complex64> {
    Ok((z + 1.0 - fraction_tail(z)?).inv())
}

/// `1/(z+3- 4/(z+5- 9/(z+7- ...)))` by modified Lentz.
fn fraction_tail(z: Complex64) -> Result<Complex64> {
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = z + 3.0;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for i in 2..=MAX_FRACTION_ITERATIONS {
        let fi = i as f64;
        let a = -fi * fi;
        let b = z + (2.0 * fi + 1.0);
        d = b + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < FRACTION_TOLERANCE {
            return Ok(f.inv());
        }
    }
    Err(Error::Convergence {
        method: "E1 continued fraction",
        iterations: MAX_FRACTION_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn value_at_one() {
        // ∫_1^∞ e^{-u}/u du, independent high-precision quadrature.
        let v = exp_integral_e1(c(1.0, 0.0)).unwrap();
        assert!((v.re - 0.219_383_934_395_520_27).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn small_argument_matches_leading_terms() {
        let z = 0.001;
        let v = exp_integral_e1(c(z, 0.0)).unwrap();
        let leading = -EULER_GAMMA - z.ln() + z - z * z / 4.0;
        assert!((v.re - leading).abs() < 1e-10);
        assert!((v.re - 6.331_539_364_136_149).abs() < 1e-13);
    }

    #[test]
    fn scaled_large_real_argument() {
        let g = exp_integral_e1_scaled(c(100.0, 0.0)).unwrap();
        assert!((g.re - 0.009_901_942_286_733_018).abs() < 1e-16);
        let g = exp_integral_e1_scaled(c(10.0, 0.0)).unwrap();
        assert!((g.re - 0.091_563_333_939_788_08).abs() < 1e-15);
    }

    #[test]
    fn scaled_and_unscaled_agree() {
        let z = c(2.0, 1.0);
        let g = exp_integral_e1_scaled(z).unwrap();
        let e = exp_integral_e1(z).unwrap();
        assert!(rel(g * (-z).exp(), e) < 1e-12);
    }

    #[test]
    fn reflection_is_exact_on_both_expansions() {
        for z in [c(0.5, 2.0), c(-3.0, 7.0), c(12.0, -0.3), c(-20.0, 1.0)] {
            let a = exp_integral_e1(z.conj()).unwrap();
            let b = exp_integral_e1(z).unwrap().conj();
            assert!(rel(a, b) < 1e-15, "{z}");
        }
    }

    #[test]
    fn branch_cut_and_origin_are_rejected() {
        assert!(matches!(exp_integral_e1(c(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(exp_integral_e1(c(-1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(
            exp_integral_e1_scaled(c(-7.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            exp_integral_e1(c(f64::NAN, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn just_above_and_below_the_cut() {
        // E1(-x ± i0) = -Ei(x) ∓ iπ
        let above = exp_integral_e1(c(-1.0, 1e-300)).unwrap();
        let below = exp_integral_e1(c(-1.0, -1e-300)).unwrap();
        assert!((above.re + 1.895_117_816_355_936_8).abs() < 1e-14);
        assert!((above.im + std::f64::consts::PI).abs() < 1e-14);
        assert!((below.im - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn large_positive_argument_underflows_to_zero() {
        let e = exp_integral_e1(c(800.0, 3.0)).unwrap();
        assert_eq!(e, c(0.0, 0.0));
        let g = exp_integral_e1_scaled(c(800.0, 3.0)).unwrap();
        let z = c(800.0, 3.0);
        let approx = z.inv() * (1.0 - z.inv() + 2.0 * z.inv() * z.inv());
        assert!(rel(g, approx) < 5e-8);
    }

    #[test]
    fn expansion_selection() {
        assert_eq!(expansion_for(c(3.0, 2.0)), Expansion::PowerSeries);
        assert_eq!(expansion_for(c(-30.0, 5.0)), Expansion::PowerSeries);
        assert_eq!(expansion_for(c(-30.0, 20.0)), Expansion::ContinuedFraction);
        assert_eq!(expansion_for(c(5.0, 0.0)), Expansion::ContinuedFraction);
    }
}
