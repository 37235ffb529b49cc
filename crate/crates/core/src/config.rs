//! `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys are case-sensitive and `-` is accepted in place of `_`. Unknown and
//! repeated keys are errors, so a typo never silently falls back to a default.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::{Grid, Method};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub beta: Option<f64>,
    pub e0: Option<f64>,
    pub gamma0: Option<f64>,
    pub emin: Option<f64>,
    pub hbar: Option<f64>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub points: Option<usize>,
    pub grid: Option<Grid>,
    pub method: Option<Method>,
    pub terms: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub eta_max: Option<f64>,
    pub amp_const: Option<f64>,
}

pub const KEYS: [&str; 15] = [
    "beta", "e0", "gamma0", "emin", "hbar", "tau_min", "tau_max", "points", "grid", "method",
    "terms", "rel_tol", "abs_tol", "eta_max", "amp_const",
];

fn set<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str, line: usize) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if slot.is_some() {
        return Err(Error::Parse {
            line,
            message: format!("duplicate key '{key}'"),
        });
    }
    let parsed = value.parse::<T>().map_err(|e| Error::Parse {
        line,
        message: format!("{key}: '{value}': {e}"),
    })?;
    *slot = Some(parsed);
    Ok(())
}

fn set_finite(slot: &mut Option<f64>, key: &str, value: &str, line: usize) -> Result<()> {
    set(slot, key, value, line)?;
    if slot.is_some_and(|v| !v.is_finite()) {
        *slot = None;
        return Err(Error::Parse {
            line,
            message: format!("{key}: '{value}' is not a finite number"),
        });
    }
    Ok(())
}

impl Config {
    pub fn parse(input: &str) -> Result<Self> {
        let mut c = Config::default();
        for (index, raw) in input.lines().enumerate() {
            let line = index + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (key, value) = text.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected key = value, got '{text}'"),
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "beta" => set_finite(&mut c.beta, &key, value, line)?,
                "e0" => set_finite(&mut c.e0, &key, value, line)?,
                "gamma0" => set_finite(&mut c.gamma0, &key, value, line)?,
                "emin" => set_finite(&mut c.emin, &key, value, line)?,
                "hbar" => set_finite(&mut c.hbar, &key, value, line)?,
                "tau_min" => set_finite(&mut c.tau_min, &key, value, line)?,
                "tau_max" => set_finite(&mut c.tau_max, &key, value, line)?,
                "points" => set(&mut c.points, &key, value, line)?,
                "grid" => set(&mut c.grid, &key, value, line)?,
                "method" => set(&mut c.method, &key, value, line)?,
                "terms" => set(&mut c.terms, &key, value, line)?,
                "rel_tol" => set_finite(&mut c.rel_tol, &key, value, line)?,
                "abs_tol" => set_finite(&mut c.abs_tol, &key, value, line)?,
                "eta_max" => set_finite(&mut c.eta_max, &key, value, line)?,
                "amp_const" => set_finite(&mut c.amp_const, &key, value, line)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key '{key}' (known: {})", KEYS.join(", ")),
                    })
                }
            }
        }
        Ok(c)
    }

    /// Renders the set keys back to `key = value` lines, in [`KEYS`] order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push_str(&format!("{k} = {v}\n"));
            }
        };
        let f = |v: Option<f64>| v.map(|x| format!("{x:e}"));
        push("beta", f(self.beta));
        push("e0", f(self.e0));
        push("gamma0", f(self.gamma0));
        push("emin", f(self.emin));
        push("hbar", f(self.hbar));
        push("tau_min", f(self.tau_min));
        push("tau_max", f(self.tau_max));
        push("points", self.points.map(|v| v.to_string()));
        push("grid", self.grid.map(|v| v.to_string()));
        push("method", self.method.map(|v| v.to_string()));
        push("terms", self.terms.map(|v| v.to_string()));
        push("rel_tol", f(self.rel_tol));
        push("abs_tol", f(self.abs_tol));
        push("eta_max", f(self.eta_max));
        push("amp_const", f(self.amp_const));
        out
    }
}
