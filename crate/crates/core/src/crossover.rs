//! Cross-over time between the canonical exponential era and the late-time
//! power-law tail, and the survivor arithmetic built on it.
//!
//! `τ_T` is the largest root of
//! `F(τ) = ln(A² e^{-τ}) - ln|a_lt(τ)|²`, with `a_lt` the late-time amplitude
//! at a chosen order and `A` the canonical amplitude constant (default `N`,
//! which is the prefactor the exact amplitude carries in its exponential era).

use serde::{Deserialize, Serialize};

use crate::asymptotics::{amplitude_late, MAX_AMPLITUDE_ORDER};
use crate::error::{Error, Result};
use crate::model::BreitWignerModel;

pub const SCAN_LOWER: f64 = 1.0;
pub const SCAN_UPPER: f64 = 1.0e4;
const SCAN_POINTS: usize = 4000;
pub const MAX_ITERATIONS: usize = 200;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Expected survivors at or above this count are reported as observable.
pub const OBSERVABLE_SURVIVORS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverOptions {
    /// Truncation order of `a_lt`, 1..=4.
    pub order: usize,
    /// Bound on `|F(τ_T)|`.
    pub tolerance: f64,
    /// Canonical amplitude constant `A`; `None` selects `N`.
    pub amplitude_constant: Option<f64>,
}

impl Default for CrossoverOptions {
    fn default() -> Self {
        CrossoverOptions {
            order: 1,
            tolerance: DEFAULT_TOLERANCE,
            amplitude_constant: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    pub tau_t: f64,
    /// `T = ħ τ_T / γ₀` in the model's time units.
    pub time: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub order: usize,
    pub iterations: usize,
}

/// `F(τ) = ln|a_c(τ)|² - ln|a_lt(τ)|²`; positive while the exponential dominates.
pub fn crossover_condition(
    model: &BreitWignerModel,
    tau: f64,
    order: usize,
    amplitude_constant: Option<f64>,
) -> Result<f64> {
    let a = amplitude_constant.unwrap_or_else(|| model.normalization());
    let late = amplitude_late(model, tau, order)?.value.norm_sqr();
    Ok(2.0 * a.ln() - tau - late.ln())
}

pub fn crossover_time(model: &BreitWignerModel, options: &CrossoverOptions) -> Result<CrossoverResult> {
    let order = options.order;
    if order == 0 || order > MAX_AMPLITUDE_ORDER {
        return Err(Error::domain(format!(
            "a_lt order {order} outside 1..={MAX_AMPLITUDE_ORDER}"
        )));
    }
    if !(options.tolerance > 0.0) || !options.tolerance.is_finite() {
        return Err(Error::domain(format!(
            "tolerance must be finite and positive, got {}",
            options.tolerance
        )));
    }
    if let Some(a) = options.amplitude_constant {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!(
                "amplitude constant must be finite and positive, got {a}"
            )));
        }
    }
    let f = |tau: f64| crossover_condition(model, tau, order, options.amplitude_constant);

    // walk down from the top of the range to the first sign change
    let ratio = (SCAN_UPPER / SCAN_LOWER).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let mut hi = SCAN_UPPER;
    let mut f_hi = f(hi)?;
    let mut bracket = None;
    for k in (0..SCAN_POINTS - 1).rev() {
        let lo = if k == 0 { SCAN_LOWER } else { SCAN_LOWER * ratio.powi(k as i32) };
        let f_lo = f(lo)?;
        if f_lo == 0.0 {
            return Ok(finish(model, lo, (lo, lo), 0.0, order, 0));
        }
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, f_lo, hi, f_hi));
            break;
        }
        hi = lo;
        f_hi = f_lo;
    }
    let (mut a, mut fa, mut b, mut fb) = bracket.ok_or(Error::Bracket {
        lo: SCAN_LOWER,
        hi: SCAN_UPPER,
    })?;
    let initial = (a, b);

    // Illinois variant of regula falsi, bisecting when it stalls
    let mut side = 0i8;
    for iteration in 1..=MAX_ITERATIONS {
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc.abs() <= options.tolerance || b - a <= 4.0 * f64::EPSILON * c {
            if fc.abs() <= options.tolerance {
                return Ok(finish(model, c, initial, fc, order, iteration));
            }
            break;
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    let mid = 0.5 * (a + b);
    Err(Error::RootNotConverged {
        iterations: MAX_ITERATIONS,
        residual: f(mid)?,
    })
}

fn finish(
    model: &BreitWignerModel,
    tau_t: f64,
    bracket: (f64, f64),
    residual: f64,
    order: usize,
    iterations: usize,
) -> CrossoverResult {
    CrossoverResult {
        tau_t,
        time: tau_t * model.lifetime(),
        bracket,
        residual,
        order,
        iterations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivorCount {
    pub expected: f64,
    /// `p·N` is at least [`OBSERVABLE_SURVIVORS`].
    pub observable: bool,
}

/// Expected number of survivors out of `n_created` at survival probability `p`.
pub fn survivor_count(p: f64, n_created: f64) -> Result<SurvivorCount> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability must lie in [0, 1], got {p}")));
    }
    if !(n_created > 0.0) || !n_created.is_finite() {
        return Err(Error::domain(format!(
            "number created must be finite and positive, got {n_created}"
        )));
    }
    let expected = p * n_created;
    Ok(SurvivorCount {
        expected,
        observable: expected >= OBSERVABLE_SURVIVORS,
    })
}

/// Which description the survival probability follows at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Within tolerance of `N² e^{-τ}`.
    Exponential,
    /// Within tolerance of `|a_lt|²`.
    PowerLaw,
    /// Neither.
    Transition,
}

/// Classifies a survival probability `p` at `τ` by comparing it, in log
/// space, with the canonical law `N² e^{-τ}` and with the order-4 late-time
/// law. `log_tolerance` bounds `|ln(p/reference)|`.
pub fn classify_regime(model: &BreitWignerModel, tau: f64, p: f64, log_tolerance: f64) -> Result<Regime> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("probability must be positive to classify, got {p}")));
    }
    let n = model.normalization();
    let canonical = (p.ln() - (2.0 * n.ln() - tau)).abs();
    let late = amplitude_late(model, tau, MAX_AMPLITUDE_ORDER)?.value.norm_sqr();
    let power = (p.ln() - late.ln()).abs();
    Ok(if canonical <= log_tolerance && canonical <= power {
        Regime::Exponential
    } else if power <= log_tolerance {
        Regime::PowerLaw
    } else {
        Regime::Transition
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survivor_examples() {
        let s = survivor_count(1e-3, 1e5).unwrap();
        assert!((s.expected - 100.0).abs() < 1e-12);
        assert_eq!(survivor_count(0.0, 10.0).unwrap().expected, 0.0);
        assert_eq!(survivor_count(1.0, 5.0).unwrap().expected, 5.0);
        assert!(!survivor_count(1.0, 5.0).unwrap().observable);
        assert!(survivor_count(1.1, 5.0).is_err());
        assert!(survivor_count(-0.1, 5.0).is_err());
        assert!(survivor_count(f64::NAN, 5.0).is_err());
        assert!(survivor_count(0.5, 0.0).is_err());
    }

    #[test]
    fn residual_within_tolerance() {
        let m = BreitWignerModel::from_beta(10.0).unwrap();
        let r = crossover_time(&m, &CrossoverOptions::default()).unwrap();
        assert!(r.residual.abs() <= DEFAULT_TOLERANCE);
        assert!(r.bracket.0 <= r.tau_t && r.tau_t <= r.bracket.1);
        assert!(r.tau_t > 1.0);
        assert_eq!(r.time, r.tau_t);
    }

    #[test]
    fn rejects_bad_options() {
        let m = BreitWignerModel::from_beta(2.0).unwrap();
        for o in [
            CrossoverOptions { order: 0, ..Default::default() },
            CrossoverOptions { order: 5, ..Default::default() },
            CrossoverOptions { tolerance: 0.0, ..Default::default() },
            CrossoverOptions { amplitude_constant: Some(-1.0), ..Default::default() },
        ] {
            assert!(matches!(crossover_time(&m, &o), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn no_bracket_when_constant_is_tiny() {
        // A so small that the exponential never dominates on [1, 1e4]
        let m = BreitWignerModel::from_beta(2.0).unwrap();
        let o = CrossoverOptions { amplitude_constant: Some(1e-6), ..Default::default() };
        assert!(matches!(crossover_time(&m, &o), Err(Error::Bracket { .. })));
    }
}
