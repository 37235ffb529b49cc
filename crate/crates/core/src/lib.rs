//! Survival amplitude, effective Hamiltonian and late-time behaviour of an
//! unstable state whose energy density is a Breit–Wigner curve cut off at the
//! bottom of the spectrum.
//!
//! Everything is computed in the dimensionless variables `β = (E₀ - E_min)/γ₀`
//! and `τ = γ₀t/ħ` ([`model`]). [`exact`] evaluates the closed forms through
//! the exponential integral in [`special`]; [`quad`] integrates the defining
//! Fourier integrals directly and serves as an independent check.
//! [`asymptotics`] holds the inverse-power late-time series, [`crossover`] the
//! time at which they take over from the exponential, and [`scan`] / [`config`]
//! the grid evaluation and file formats used by the command-line tool.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod config;
pub mod crossover;
pub mod error;
pub mod exact;
pub mod model;
pub mod quad;
pub mod scan;
pub mod special;

pub use error::{Error, Result};
pub use model::BreitWignerModel;
