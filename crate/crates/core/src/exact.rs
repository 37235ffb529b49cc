//! Closed-form survival amplitude and effective Hamiltonian.
//!
//! With `z₊ = -i(β + i/2)τ = τ/2 - iβτ`, `z₋ = -i(β - i/2)τ = -τ/2 - iβτ` and
//! the scaled exponential integral `G(z) = e^z E1(z)`, the two defining
//! integrals reduce to
//!
//! ```text
//! I_β(τ) = ∫_{-β}^∞ e^{-iητ}/(η² + 1/4) dη = 2π e^{-τ/2} - i e^{iβτ} (G(z₊) - G(z₋))
//! J_β(τ) = ∫_{-β}^∞ η e^{-iητ}/(η² + 1/4) dη = -iπ e^{-τ/2} + ½ e^{iβτ} (G(z₊) + G(z₋))
//! ```
//!
//! The exponential (canonical) part and the E1 (power-law) part are kept
//! apart and summed last, so late-time values survive long after `e^{-τ/2}`
//! underflows.
//!
//! Phase convention: the amplitude carries the global phase `e^{-iE₀t/ħ}`
//! measured from `E_min`, i.e. `a(τ) = (N/2π) e^{-iβτ} I_β(τ)`. Only `|a|²`,
//! `E(t)`, `γ(t)` and `κ(t)` are physical.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::BreitWignerModel;
use crate::special::{
    exp_integral_e1, exp_integral_e1_scaled, exp_integral_e1_scaled_remainder, expansion_for, Expansion,
};

/// `|I_β|` below which `J/I` is not trusted.
pub const MIN_RELIABLE_MODULUS: f64 = 1e-280;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeValue {
    pub value: Complex64,
    pub tau: f64,
}

impl AmplitudeValue {
    pub fn probability(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// `h(t)/γ₀ = energy - (i/2) rate`, with `energy = (E(t) - E_min)/γ₀` and `rate = γ(t)/γ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveHamiltonianValue {
    pub energy: f64,
    pub rate: f64,
    pub tau: f64,
}

impl EffectiveHamiltonianValue {
    fn from_reduced(h_over_gamma0: Complex64, tau: f64) -> Self {
        EffectiveHamiltonianValue {
            energy: h_over_gamma0.re,
            rate: -2.0 * h_over_gamma0.im,
            tau,
        }
    }

    /// `h/γ₀` measured from `E_min`.
    pub fn h(&self) -> Complex64 {
        Complex64::new(self.energy, -0.5 * self.rate)
    }

    /// `(E(t) - E_min)/(E₀ - E_min)`.
    pub fn kappa(&self, beta: f64) -> f64 {
        self.energy / beta
    }

    pub fn energy_in(&self, model: &BreitWignerModel) -> f64 {
        model.emin() + model.gamma0() * self.energy
    }

    pub fn rate_in(&self, model: &BreitWignerModel) -> f64 {
        model.gamma0() * self.rate
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain(format!("{name} must be finite and positive, got {v}")));
    }
    Ok(())
}

/// The pieces shared by every closed-form quantity at one `(β, τ)`.
#[derive(Debug, Clone, Copy)]
struct Pieces {
    beta: f64,
    tau: f64,
    z_plus: Complex64,
    z_minus: Complex64,
    g_plus: Complex64,
    g_minus: Complex64,
    /// `zG(z) - 1 + 1/z` at `z₊` and `z₋`, when both lie in the
    /// continued-fraction region.
    remainders: Option<(Complex64, Complex64)>,
    /// `e^{iβτ}`
    phase: Complex64,
    /// `e^{-τ/2}`
    decay: f64,
}

impl Pieces {
    fn new(beta: f64, tau: f64) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("tau", tau)?;
        let half = 0.5 * tau;
        let bt = beta * tau;
        let z_plus = Complex64::new(half, -bt);
        let z_minus = Complex64::new(-half, -bt);
        let far = |z| expansion_for(z) == Expansion::ContinuedFraction;
        let remainders = if far(z_plus) && far(z_minus) {
            Some((
                exp_integral_e1_scaled_remainder(z_plus)?,
                exp_integral_e1_scaled_remainder(z_minus)?,
            ))
        } else {
            None
        };
        Ok(Pieces {
            beta,
            tau,
            z_plus,
            z_minus,
            g_plus: exp_integral_e1_scaled(z_plus)?,
            g_minus: exp_integral_e1_scaled(z_minus)?,
            remainders,
            phase: Complex64::from_polar(1.0, bt),
            decay: (-half).exp(),
        })
    }

    fn q_tau(&self) -> f64 {
        (self.beta * self.beta + 0.25) * self.tau
    }

    /// `G(z₊) - G(z₋)`. Far from the origin the leading `1/z - 1/z²` parts
    /// are taken in closed form: `1/(qτ) - 2iβ/(qτ)²`.
    fn g_difference(&self) -> Complex64 {
        match self.remainders {
            None => self.g_plus - self.g_minus,
            Some((rp, rm)) => {
                let qt = self.q_tau();
                Complex64::new(1.0 / qt, -2.0 * self.beta / (qt * qt)) + rp / self.z_plus
                    - rm / self.z_minus
            }
        }
    }

    fn i_beta(&self) -> Complex64 {
        let power_law = -I * self.phase * self.g_difference();
        power_law + 2.0 * PI * self.decay
    }

    fn j_beta(&self) -> Complex64 {
        let power_law = 0.5 * self.phase * (self.g_plus + self.g_minus);
        power_law - I * (PI * self.decay)
    }

    fn checked_i(&self) -> Result<Complex64> {
        let i = self.i_beta();
        let modulus = i.norm();
        if !(modulus >= MIN_RELIABLE_MODULUS) {
            return Err(Error::NearZeroAmplitude { modulus });
        }
        Ok(i)
    }

    fn ratio(&self) -> Result<Complex64> {
        Ok(self.j_beta() / self.checked_i()?)
    }

    /// `(J + βI)/I`, i.e. `h/γ₀` from `E_min`. The numerator is the
    /// transform of `(η+β)/(η²+¼)`, formed without the `J ≈ -βI` cancellation
    /// of late times: `(½ - iβ)G₊ + (½ + iβ)G₋ = (z₊G₊ - z₋G₋)/τ`.
    fn reduced_h(&self) -> Result<Complex64> {
        let i = self.checked_i()?;
        let b = self.beta;
        let power_law = match self.remainders {
            None => {
                self.phase
                    * (Complex64::new(0.5, -b) * self.g_plus + Complex64::new(0.5, b) * self.g_minus)
            }
            Some((rp, rm)) => self.phase * ((rp - rm) - 1.0 / self.q_tau()) / self.tau,
        };
        let canonical = 2.0 * PI * self.decay * Complex64::new(b, -0.5);
        Ok((power_law + canonical) / i)
    }
}

/// `lim_{τ→0⁺} I_β(τ) = π + 2 arctan 2β`.
pub fn i_beta_at_zero(beta: f64) -> f64 {
    PI + 2.0 * (2.0 * beta).atan()
}

pub fn i_beta(beta: f64, tau: f64) -> Result<Complex64> {
    Ok(Pieces::new(beta, tau)?.i_beta())
}

/// `J_β(τ) = i ∂I_β/∂τ`. Diverges like `-ln τ` as `τ → 0⁺`.
pub fn j_beta(beta: f64, tau: f64) -> Result<Complex64> {
    Ok(Pieces::new(beta, tau)?.j_beta())
}

/// `h/γ₀` measured from `E_min`, `β + J_β/I_β`, without forming `J/I`.
pub fn reduced_hamiltonian(beta: f64, tau: f64) -> Result<Complex64> {
    Pieces::new(beta, tau)?.reduced_h()
}

/// `J_β(τ)/I_β(τ)`; fails with [`Error::NearZeroAmplitude`] when `|I_β|` is below
/// [`MIN_RELIABLE_MODULUS`].
pub fn j_over_i(beta: f64, tau: f64) -> Result<Complex64> {
    Pieces::new(beta, tau)?.ratio()
}

pub fn amplitude(model: &BreitWignerModel, tau: f64) -> Result<AmplitudeValue> {
    if tau == 0.0 {
        return Ok(AmplitudeValue {
            value: Complex64::new(1.0, 0.0),
            tau,
        });
    }
    let beta = model.beta();
    let p = Pieces::new(beta, tau)?;
    let n = model.normalization();
    let power_law = -I * (n / (2.0 * PI)) * p.g_difference();
    let canonical = n * p.decay * p.phase.conj();
    Ok(AmplitudeValue {
        value: power_law + canonical,
        tau,
    })
}

pub fn survival_probability(model: &BreitWignerModel, tau: f64) -> Result<f64> {
    Ok(amplitude(model, tau)?.probability())
}

/// `h(t) = E₀ + γ₀ J_β/I_β`. Defined for `τ > 0` only: the mean energy of the
/// Breit–Wigner density diverges, so `h(0⁺)` is unbounded.
pub fn effective_hamiltonian(model: &BreitWignerModel, tau: f64) -> Result<EffectiveHamiltonianValue> {
    let h = Pieces::new(model.beta(), tau)?.reduced_h()?;
    Ok(EffectiveHamiltonianValue::from_reduced(h, tau))
}

/// Second route to `h(t)`, from the amplitude and its time derivative written
/// directly with unscaled `E1` values and an explicit `e^τ`. Overflows once
/// `e^τ` does (τ ≳ 709).
pub fn effective_hamiltonian_alt(model: &BreitWignerModel, tau: f64) -> Result<EffectiveHamiltonianValue> {
    let beta = model.beta();
    check_positive("tau", tau)?;
    let e1_plus = exp_integral_e1(Complex64::new(0.5 * tau, -beta * tau))?;
    let e1_minus = exp_integral_e1(Complex64::new(-0.5 * tau, -beta * tau))?;
    let growth = tau.exp();
    if !growth.is_finite() {
        return Err(Error::Overflow("e^tau in the derivative-quotient form of h(t)"));
    }
    let k = I / (2.0 * PI);
    let numerator = 1.0 + k * (growth * e1_plus + e1_minus);
    let denominator = 1.0 - k * (growth * e1_plus - e1_minus);
    let h = Complex64::new(beta, 0.0) - 0.5 * I * numerator / denominator;
    if !h.re.is_finite() || !h.im.is_finite() {
        return Err(Error::Overflow("derivative-quotient form of h(t)"));
    }
    Ok(EffectiveHamiltonianValue::from_reduced(h, tau))
}

/// `κ = (E(t) - E_min)/(E₀ - E_min) = 1 + Re(J/I)/β`.
pub fn kappa(model: &BreitWignerModel, tau: f64) -> Result<f64> {
    let beta = model.beta();
    Ok(Pieces::new(beta, tau)?.reduced_h()?.re / beta)
}

/// `χ(τ) = e^τ E1(z₊) - E1(z₋)`. A canonical amplitude on an interval would
/// force χ to be constant there.
pub fn chi(beta: f64, tau: f64) -> Result<Complex64> {
    let p = Pieces::new(beta, tau)?;
    let growth = (0.5 * tau).exp();
    if !growth.is_finite() {
        return Err(Error::Overflow("e^(tau/2) in chi"));
    }
    Ok(growth * p.phase * (p.g_plus - p.g_minus))
}

/// `dχ/dτ = e^τ E1(z₊)`.
pub fn chi_derivative(beta: f64, tau: f64) -> Result<Complex64> {
    let p = Pieces::new(beta, tau)?;
    let growth = (0.5 * tau).exp();
    if !growth.is_finite() {
        return Err(Error::Overflow("e^(tau/2) in d chi/d tau"));
    }
    Ok(growth * p.phase * p.g_plus)
}
