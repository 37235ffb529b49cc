//! Adaptive-quadrature oracle for the defining integrals
//!
//! ```text
//! I_β(τ) = ∫_{-β}^∞ e^{-iητ}/(η² + 1/4) dη,    J_β(τ) = ∫_{-β}^∞ η e^{-iητ}/(η² + 1/4) dη
//! ```
//!
//! The finite part `[-β, c]` is integrated with a globally adaptive 21-point
//! Gauss–Kronrod scheme whose initial panels never exceed half an oscillation
//! (`π/|τ|`). The remainder `(c, ∞)` is added analytically from two
//! integration-by-parts boundary terms, `e^{-icτ} [f(c)/(iτ) + f'(c)/(iτ)²]`.
//!
//! The cut `c` is the smallest point at which the first omitted boundary term
//! drops below `abs_tol/10`, capped by `eta_max`; it is never placed below
//! `40/|τ|`, where the boundary expansion stops being asymptotic. Nothing here
//! touches the exponential-integral code in [`crate::special`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::BreitWignerModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub eta_max: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            eta_max: 1e4,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if !(self.eta_max > 1.0) || !self.eta_max.is_finite() {
            return Err(Error::domain("eta_max must be finite and greater than one"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

/// Value of a quadrature together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub subdivisions: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

/// Panels whose error is within this many ulps of `∫|f|` are at round-off level.
const ROUNDOFF_ULPS: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    roundoff_limited: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut res_abs = f_center.norm() * WGK[10];
    let mut f1 = [Complex64::new(0.0, 0.0); 10];
    let mut f2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        f1[j] = lo;
        f2[j] = hi;
        kronrod += (lo + hi) * WGK[j];
        res_abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (lo + hi) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).norm() + (f2[j] - mean).norm());
    }
    let scale = half.abs();
    let value = kronrod * half;
    res_abs *= scale;
    res_asc *= scale;

    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = ROUNDOFF_ULPS * f64::EPSILON * res_abs;
    let roundoff_limited = error <= floor;
    Panel {
        a,
        b,
        value,
        error: error.max(floor),
        roundoff_limited,
    }
}

/// Globally adaptive Gauss–Kronrod integration of a complex integrand over
/// consecutive `breakpoints`, each initial panel no wider than `max_width`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol·|I|)` or
/// when the worst panel is already at round-off level; fails with
/// [`Error::ToleranceNotMet`] after `max_subdivisions` bisections.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    breakpoints: &[f64],
    max_width: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pieces = ((b - a).abs() / max_width).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        for k in 0..pieces {
            let lo = a + step * k as f64;
            let hi = if k + 1 == pieces { b } else { lo + step };
            heap.push(gauss_kronrod_21(&f, lo, hi));
        }
    }

    let mut subdivisions = 0;
    let mut value: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        let target = abs_tol.max(rel_tol * value.norm());
        let worst = match heap.peek() {
            Some(p) if error > target && !p.roundoff_limited => *p,
            _ => break,
        };
        if subdivisions >= max_subdivisions {
            return Err(Error::ToleranceNotMet {
                estimate: error,
                subdivisions,
            });
        }
        heap.pop();
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod_21(&f, worst.a, mid);
        let right = gauss_kronrod_21(&f, mid, worst.b);
        heap.push(left);
        heap.push(right);
        if worst.error > 0.5 * error {
            // a dominant panel was replaced: running totals would lose everything
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        } else {
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
        }
        subdivisions += 1;
    }
    // re-sum to drop the drift of the running totals
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate {
        value,
        error,
        subdivisions,
    })
}

/// Non-oscillatory weight of the two defining integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `1/(η² + 1/4)`
    Lorentzian,
    /// `η/(η² + 1/4)`
    FirstMoment,
}

impl Weight {
    pub fn value(self, eta: f64) -> f64 {
        let q = eta * eta + 0.25;
        match self {
            Weight::Lorentzian => 1.0 / q,
            Weight::FirstMoment => eta / q,
        }
    }

    fn first_derivative(self, eta: f64) -> f64 {
        let q = eta * eta + 0.25;
        match self {
            Weight::Lorentzian => -2.0 * eta / (q * q),
            Weight::FirstMoment => (0.25 - eta * eta) / (q * q),
        }
    }

    fn second_derivative(self, eta: f64) -> f64 {
        let q = eta * eta + 0.25;
        match self {
            Weight::Lorentzian => (6.0 * eta * eta - 0.5) / (q * q * q),
            Weight::FirstMoment => 2.0 * eta * (eta * eta - 0.75) / (q * q * q),
        }
    }

    /// Smallest `c` with `|w''(c)|/|τ|³ ≤ bound`, from the large-η form of `w''`.
    fn cut_for(self, tau: f64, bound: f64) -> f64 {
        let t3 = tau.abs().powi(3);
        match self {
            Weight::Lorentzian => (6.0 / (t3 * bound)).powf(0.25),
            Weight::FirstMoment => (2.0 / (t3 * bound)).cbrt(),
        }
    }
}

fn breakpoints(beta: f64, cut: f64) -> Vec<f64> {
    let mut points = vec![-beta];
    let mut decade = 10f64.powi(beta.log10().floor() as i32);
    while decade > 1.0 {
        if decade < beta {
            points.push(-decade);
        }
        decade /= 10.0;
    }
    for p in [-1.0, 0.0, 1.0] {
        if p > -beta && p < cut {
            points.push(p);
        }
    }
    let mut decade = 10.0;
    while decade < cut {
        points.push(decade);
        decade *= 10.0;
    }
    points.push(cut);
    points.dedup();
    points
}

/// `∫_{-β}^∞ w(η) e^{-iηω} dη` for a signed frequency `ω`.
///
/// `ω = 0` is accepted for the Lorentzian weight only (closed-form tail); the
/// first-moment weight is then not integrable.
pub fn oscillatory_integral(
    weight: Weight,
    beta: f64,
    omega: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    settings.validate()?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite and positive, got {beta}")));
    }
    if !omega.is_finite() {
        return Err(Error::domain("frequency must be finite"));
    }

    if omega == 0.0 {
        if weight == Weight::FirstMoment {
            return Err(Error::domain("first-moment integral diverges logarithmically at tau = 0"));
        }
        let cut = settings.eta_max;
        let body = integrate_adaptive(
            |eta| Complex64::new(weight.value(eta), 0.0),
            &breakpoints(beta, cut),
            f64::INFINITY,
            settings.abs_tol,
            settings.rel_tol,
            settings.max_subdivisions,
        )?;
        let tail = 2.0 * (0.5 / cut).atan();
        return Ok(Estimate {
            value: body.value + tail,
            ..body
        });
    }

    let bound = 0.1 * settings.abs_tol;
    let cut = weight
        .cut_for(omega, bound)
        .min(settings.eta_max)
        .max(40.0 / omega.abs())
        .max(10.0)
        .max(2.0 - beta);
    let half_period = PI / omega.abs();
    let body = integrate_adaptive(
        |eta| Complex64::from_polar(weight.value(eta), -eta * omega),
        &breakpoints(beta, cut),
        half_period,
        settings.abs_tol,
        settings.rel_tol,
        settings.max_subdivisions,
    )?;

    let i_omega = Complex64::new(0.0, omega);
    let tail = Complex64::from_polar(1.0, -cut * omega)
        * (weight.value(cut) / i_omega + weight.first_derivative(cut) / (i_omega * i_omega));
    let remainder = weight.second_derivative(cut).abs() / omega.abs().powi(3);
    Ok(Estimate {
        value: body.value + tail,
        error: body.error + 2.0 * remainder,
        subdivisions: body.subdivisions,
    })
}

pub fn i_by_quadrature_estimate(beta: f64, tau: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    if !(tau >= 0.0) {
        return Err(Error::domain(format!("tau must be non-negative, got {tau}")));
    }
    oscillatory_integral(Weight::Lorentzian, beta, tau, settings)
}

pub fn i_by_quadrature(beta: f64, tau: f64, settings: &QuadratureSettings) -> Result<Complex64> {
    Ok(i_by_quadrature_estimate(beta, tau, settings)?.value)
}

pub fn j_by_quadrature_estimate(beta: f64, tau: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    if !(tau > 0.0) {
        return Err(Error::domain(format!(
            "J diverges logarithmically at tau = 0; need tau > 0, got {tau}"
        )));
    }
    oscillatory_integral(Weight::FirstMoment, beta, tau, settings)
}

pub fn j_by_quadrature(beta: f64, tau: f64, settings: &QuadratureSettings) -> Result<Complex64> {
    Ok(j_by_quadrature_estimate(beta, tau, settings)?.value)
}

/// `(N/2π) e^{-iβτ} I_β(τ)`, same phase convention as [`crate::exact::amplitude`].
pub fn amplitude_by_quadrature(
    model: &BreitWignerModel,
    tau: f64,
    settings: &QuadratureSettings,
) -> Result<Complex64> {
    let beta = model.beta();
    let i = i_by_quadrature(beta, tau, settings)?;
    let phase = Complex64::from_polar(1.0, -beta * tau);
    Ok(model.normalization() / (2.0 * PI) * phase * i)
}
