//! Late-time (τ ≫ 1) series for `I_β`, `J_β`, `J_β/I_β`, the amplitude, the
//! instantaneous energy and decay rate, plus the Λ(t) coefficient map.
//!
//! With `q = β² + 1/4` and `x = i/τ`:
//!
//! ```text
//! I_β ≈ x e^{iβτ}/q · Σ b_k x^k        J_β ≈ x e^{iβτ}/q · Σ a_k x^k
//! J_β/I_β ≈ Σ φ_k x^k                  a_lt ≈ N/(2π q) · Σ b_k x^{k+1}
//! ```
//!
//! The brace coefficients `b_k`, `a_k` are the integration-by-parts boundary
//! terms at `η = -β`. The ratio coefficients `φ_k` follow by series division.
//! The published ratio coefficients of orders 3 and 4 do not survive that
//! division; they are kept in [`printed_ratio_coefficients`] for comparison and
//! [`ratio_coefficients`] holds the regenerated values used everywhere here.
//! The exponentially small `2π e^{-τ/2}` canonical part is dropped.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::BreitWignerModel;

pub const MAX_ORDER: usize = 5;
pub const MAX_AMPLITUDE_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    I,
    J,
    Ratio,
    Amplitude,
    Energy,
    Rate,
}

impl SeriesKind {
    /// Whether the expansion variable is `i/τ` (otherwise `1/τ`).
    pub fn uses_imaginary_variable(self) -> bool {
        !matches!(self, SeriesKind::Energy | SeriesKind::Rate)
    }

    /// Power of the variable multiplying the first coefficient.
    pub fn leading_power(self) -> i32 {
        match self {
            SeriesKind::I | SeriesKind::J | SeriesKind::Amplitude => 1,
            SeriesKind::Ratio | SeriesKind::Energy | SeriesKind::Rate => 0,
        }
    }
}

/// A truncated series `Σ_{k<order} c_k v^{k+p}` in `v = i/τ` or `v = 1/τ`,
/// with `p` the kind's leading power. Any non-oscillating prefactor is folded
/// into the coefficients; the `e^{iβτ}` phase of `I_β`, `J_β` is applied by the
/// evaluating function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    pub kind: SeriesKind,
    pub coefficients: Vec<Complex64>,
    pub order: usize,
}

/// A series value together with the optimal-truncation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub order: usize,
    /// The last retained non-zero term is larger than the one before it, so
    /// the series is being used past its optimal truncation point.
    pub beyond_optimal_truncation: bool,
}

impl AsymptoticSeries {
    pub fn new(kind: SeriesKind, coefficients: Vec<Complex64>, order: usize) -> Result<Self> {
        if order == 0 || order > coefficients.len() {
            return Err(Error::domain(format!(
                "series order {order} outside 1..={}",
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("series coefficients must be finite"));
        }
        Ok(AsymptoticSeries {
            kind,
            coefficients,
            order,
        })
    }

    pub fn evaluate(&self, tau: f64) -> Result<SeriesValue> {
        check_tau(tau)?;
        let v = if self.kind.uses_imaginary_variable() {
            Complex64::new(0.0, 1.0 / tau)
        } else {
            Complex64::new(1.0 / tau, 0.0)
        };
        let retained = &self.coefficients[..self.order];
        // Horner in v, highest power first
        let mut sum = Complex64::new(0.0, 0.0);
        for c in retained.iter().rev() {
            sum = sum * v + c;
        }
        let value = sum * v.powi(self.kind.leading_power());

        let magnitudes: Vec<f64> = retained
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(k, c)| c.norm() * tau.powi(-(k as i32)))
            .collect();
        let beyond = match magnitudes.as_slice() {
            [.., previous, last] => last > previous,
            _ => false,
        };
        Ok(SeriesValue {
            value,
            order: self.order,
            beyond_optimal_truncation: beyond,
        })
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!(
            "late-time series need finite tau > 0, got {tau}"
        )));
    }
    Ok(())
}

fn check_order(order: usize, max: usize) -> Result<()> {
    if order == 0 || order > max {
        return Err(Error::domain(format!("order {order} outside 1..={max}")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite and positive, got {beta}")));
    }
    Ok(())
}

fn q(beta: f64) -> f64 {
    beta * beta + 0.25
}

/// Brace coefficients `b_0..b_4` of the `I_β` series.
pub fn i_coefficients(beta: f64) -> [f64; 5] {
    let q = q(beta);
    let b2 = beta * beta;
    [
        -1.0,
        2.0 * beta / q,
        2.0 / q * (1.0 - 4.0 * b2 / q),
        24.0 * beta / (q * q) * (2.0 * b2 / q - 1.0),
        24.0 / (q * q) * (-16.0 * b2 * b2 / (q * q) + 12.0 * b2 / q - 1.0),
    ]
}

/// Brace coefficients `a_0..a_4` of the `J_β` series.
pub fn j_coefficients(beta: f64) -> [f64; 5] {
    let q = q(beta);
    let b2 = beta * beta;
    [
        beta,
        1.0 - 2.0 * b2 / q,
        2.0 * beta / q * (4.0 * b2 / q - 3.0),
        6.0 / q * (-8.0 * b2 * b2 / (q * q) + 8.0 * b2 / q - 1.0),
        24.0 * beta / (q * q) * (16.0 * b2 * b2 / (q * q) - 20.0 * b2 / q + 5.0),
    ]
}

/// Coefficients `φ_0..φ_4` of `J_β/I_β` in powers of `x = i/τ`, regenerated by
/// dividing the `J_β` brace by the `I_β` brace.
pub fn ratio_coefficients(beta: f64) -> [f64; 5] {
    let q = q(beta);
    let b2 = beta * beta;
    [
        -beta,
        -1.0,
        2.0 * beta / q,
        -(8.0 * b2 - 1.0) / (q * q),
        beta * (44.0 * b2 - 15.0) / (q * q * q),
    ]
}

/// The ratio coefficients as published. Orders 3 and 4 differ from
/// [`ratio_coefficients`] and are wrong; kept for comparison only.
pub fn printed_ratio_coefficients(beta: f64) -> [f64; 5] {
    let q = q(beta);
    let b = beta;
    let p3 = 1.0 + 24.0 * b - 28.0 * b.powi(2) - 96.0 * b.powi(3) + 64.0 * b.powi(4);
    let p4 = 6.0 - 21.0 * b + 48.0 * b.powi(2) - 64.0 * b.powi(3) - 288.0 * b.powi(4)
        + 464.0 * b.powi(5);
    [
        -beta,
        -1.0,
        2.0 * beta / q,
        0.25 * p3 / q.powi(3),
        0.25 * p4 / q.powi(4),
    ]
}

fn real_coefficients(c: &[f64]) -> Vec<Complex64> {
    c.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

pub fn i_series_of(beta: f64, order: usize) -> Result<AsymptoticSeries> {
    check_beta(beta)?;
    check_order(order, MAX_ORDER)?;
    let scale = 1.0 / q(beta);
    let c = i_coefficients(beta).map(|v| v * scale);
    AsymptoticSeries::new(SeriesKind::I, real_coefficients(&c), order)
}

pub fn j_series_of(beta: f64, order: usize) -> Result<AsymptoticSeries> {
    check_beta(beta)?;
    check_order(order, MAX_ORDER)?;
    let scale = 1.0 / q(beta);
    let c = j_coefficients(beta).map(|v| v * scale);
    AsymptoticSeries::new(SeriesKind::J, real_coefficients(&c), order)
}

pub fn ratio_series_of(beta: f64, order: usize) -> Result<AsymptoticSeries> {
    check_beta(beta)?;
    check_order(order, MAX_ORDER)?;
    AsymptoticSeries::new(SeriesKind::Ratio, real_coefficients(&ratio_coefficients(beta)), order)
}

pub fn amplitude_series_of(model: &BreitWignerModel, order: usize) -> Result<AsymptoticSeries> {
    check_order(order, MAX_AMPLITUDE_ORDER)?;
    let beta = model.beta();
    let scale = model.normalization() / (2.0 * PI * q(beta));
    let b = i_coefficients(beta);
    let c = b[..MAX_AMPLITUDE_ORDER].iter().map(|v| v * scale).collect::<Vec<_>>();
    AsymptoticSeries::new(SeriesKind::Amplitude, real_coefficients(&c), order)
}

/// `(E(t) - E_min)/γ₀` in powers of `1/τ`: the real part of `β + J/I`.
pub fn energy_series_of(beta: f64) -> Result<AsymptoticSeries> {
    check_beta(beta)?;
    let phi = ratio_coefficients(beta);
    // φ_k i^k, real part: k = 2 → -φ_2, k = 4 → φ_4
    let c = [0.0, 0.0, -phi[2], 0.0, phi[4]];
    AsymptoticSeries::new(SeriesKind::Energy, real_coefficients(&c), MAX_ORDER)
}

/// `γ(t)/γ₀` in powers of `1/τ`: `-2 Im(J/I)`.
pub fn rate_series_of(beta: f64) -> Result<AsymptoticSeries> {
    check_beta(beta)?;
    let phi = ratio_coefficients(beta);
    // φ_k i^k, imaginary part: k = 1 → φ_1, k = 3 → -φ_3
    let c = [0.0, -2.0 * phi[1], 0.0, 2.0 * phi[3], 0.0];
    AsymptoticSeries::new(SeriesKind::Rate, real_coefficients(&c), MAX_ORDER)
}

fn with_phase(mut v: SeriesValue, beta: f64, tau: f64) -> SeriesValue {
    v.value *= Complex64::from_polar(1.0, beta * tau);
    v
}

/// Late-time `I_β(τ)` truncated to `order` (1..=5) brace terms.
pub fn i_series(beta: f64, tau: f64, order: usize) -> Result<SeriesValue> {
    let v = i_series_of(beta, order)?.evaluate(tau)?;
    Ok(with_phase(v, beta, tau))
}

/// Late-time `J_β(τ)` truncated to `order` (1..=5) brace terms.
pub fn j_series(beta: f64, tau: f64, order: usize) -> Result<SeriesValue> {
    let v = j_series_of(beta, order)?.evaluate(tau)?;
    Ok(with_phase(v, beta, tau))
}

/// Late-time `J_β/I_β`, truncated to `order` (1..=5) terms. Order 1 is `-β`.
pub fn ratio_series(beta: f64, tau: f64, order: usize) -> Result<SeriesValue> {
    ratio_series_of(beta, order)?.evaluate(tau)
}

/// Late-time survival amplitude, same phase convention as
/// [`crate::exact::amplitude`]; `order` in 1..=4.
pub fn amplitude_late(model: &BreitWignerModel, tau: f64, order: usize) -> Result<SeriesValue> {
    amplitude_series_of(model, order)?.evaluate(tau)
}

/// Late-time `E(t)` in the model's energy units.
pub fn energy_late(model: &BreitWignerModel, tau: f64) -> Result<f64> {
    let v = energy_series_of(model.beta())?.evaluate(tau)?;
    Ok(model.emin() + model.gamma0() * v.value.re)
}

/// Late-time `γ(t)` in the model's energy units.
pub fn decay_rate_late(model: &BreitWignerModel, tau: f64) -> Result<f64> {
    let v = rate_series_of(model.beta())?.evaluate(tau)?;
    Ok(model.gamma0() * v.value.re)
}

/// Coefficients of `Λ(t) = Λ_bare + D₂/t² + D₄/t⁴` induced by a vacuum energy
/// density `ρ(t) = ρ_bare + d₂/t² + d₄/t⁴`, with `D_k = (8πG/c²) d_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaCoefficients {
    pub lambda_bare: f64,
    pub d2: f64,
    pub d4: f64,
    pub big_d2: f64,
    pub big_d4: f64,
}

impl LambdaCoefficients {
    pub fn new(rho_bare: f64, d2: f64, d4: f64, g: f64, c: f64) -> Result<Self> {
        for (name, v) in [("rho_bare", rho_bare), ("d2", d2), ("d4", d4)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [("G", g), ("c", c)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        let k = 8.0 * PI * g / (c * c);
        Ok(LambdaCoefficients {
            lambda_bare: k * rho_bare,
            d2,
            d4,
            big_d2: k * d2,
            big_d4: k * d4,
        })
    }

    pub fn at(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("t must be finite and positive, got {t}")));
        }
        let inv2 = 1.0 / (t * t);
        Ok(self.lambda_bare + inv2 * (self.big_d2 + inv2 * self.big_d4))
    }
}

/// `Λ(t) = (8πG/c²)(ρ_bare + d₂/t² + d₄/t⁴)`.
pub fn lambda_of_t(rho_bare: f64, d2: f64, d4: f64, t: f64, g: f64, c: f64) -> Result<f64> {
    LambdaCoefficients::new(rho_bare, d2, d4, g, c)?.at(t)
}
