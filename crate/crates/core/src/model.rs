//! Truncated Breit–Wigner energy density and the map between physical and
//! dimensionless variables.
//!
//! Everything downstream works in `β = (E₀ - E_min)/γ₀` and `τ = γ₀ t / ħ`;
//! with the default `ħ = 1`, τ is time measured in lifetimes `ħ/γ₀`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreitWignerModel {
    e0: f64,
    gamma0: f64,
    emin: f64,
    hbar: f64,
}

impl BreitWignerModel {
    pub fn new(e0: f64, gamma0: f64, emin: f64) -> Result<Self> {
        Self::with_hbar(e0, gamma0, emin, 1.0)
    }

    pub fn with_hbar(e0: f64, gamma0: f64, emin: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("e0", e0), ("gamma0", gamma0), ("emin", emin), ("hbar", hbar)] {
            if !v.is_finite() {
                return Err(Error::InvalidModel(format!("{name} must be finite, got {v}")));
            }
        }
        if gamma0 <= 0.0 {
            return Err(Error::InvalidModel(format!("gamma0 must be positive, got {gamma0}")));
        }
        if hbar <= 0.0 {
            return Err(Error::InvalidModel(format!("hbar must be positive, got {hbar}")));
        }
        if e0 <= emin {
            return Err(Error::InvalidModel(format!(
                "resonance energy e0 = {e0} must lie above the spectrum bound emin = {emin}"
            )));
        }
        let beta = (e0 - emin) / gamma0;
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidModel(format!("beta = {beta} is not a finite positive number")));
        }
        Ok(BreitWignerModel { e0, gamma0, emin, hbar })
    }

    /// Dimensionless model `E_min = 0`, `γ₀ = 1`, `E₀ = β`, `ħ = 1`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::new(beta, 1.0, 0.0)
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn emin(&self) -> f64 {
        self.emin
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn beta(&self) -> f64 {
        (self.e0 - self.emin) / self.gamma0
    }

    /// `ħ/γ₀`, the canonical lifetime in the model's time units.
    pub fn lifetime(&self) -> f64 {
        self.hbar / self.gamma0
    }

    pub fn tau_of_t(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
        }
        Ok(self.gamma0 * t / self.hbar)
    }

    pub fn t_of_tau(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("tau must be finite and non-negative, got {tau}")));
        }
        Ok(tau * self.hbar / self.gamma0)
    }

    pub fn normalization(&self) -> f64 {
        normalization_for_beta(self.beta())
    }

    /// `ω(E)`; zero below `E_min`, integrates to one over `[E_min, ∞)`.
    pub fn density(&self, e: f64) -> f64 {
        if e < self.emin {
            return 0.0;
        }
        let half_width = 0.5 * self.gamma0;
        let d = e - self.e0;
        self.normalization() / (2.0 * PI) * self.gamma0 / (d * d + half_width * half_width)
    }

    pub fn peak_density(&self) -> f64 {
        self.normalization() / (2.0 * PI) * 4.0 / self.gamma0
    }
}

/// `N = 2π / (π + 2 arctan 2β)`. Accepts `β = 0` (half the Lorentzian kept, `N = 2`).
pub fn normalization_for_beta(beta: f64) -> f64 {
    2.0 * PI / (PI + 2.0 * (2.0 * beta).atan())
}
