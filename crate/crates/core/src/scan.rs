//! Time scans: one row of `P`, `κ`, `γ/γ₀` and `h/γ₀` per grid point, with
//! CSV and JSON encodings that round-trip exactly.
//!
//! CSV columns are `tau,p,kappa,gamma_ratio,re_h,im_h,method`. Floats are
//! written with 17 significant digits; quantities that are undefined at a
//! point (the effective Hamiltonian at `τ = 0`) are empty fields in CSV and
//! `null` in JSON. `re_h` is `(E(t) - E_min)/γ₀` and `im_h` is `Im h(t)/γ₀`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{amplitude_late, ratio_series, MAX_AMPLITUDE_ORDER, MAX_ORDER};
use crate::error::{Error, Result};
use crate::exact;
use crate::model::BreitWignerModel;
use crate::quad::{self, QuadratureSettings};

pub const CSV_HEADER: [&str; 7] = ["tau", "p", "kappa", "gamma_ratio", "re_h", "im_h", "method"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Asymptotic,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Method::Exact),
            "asymptotic" => Ok(Method::Asymptotic),
            "quadrature" => Ok(Method::Quadrature),
            _ => Err(format!("unknown method '{s}' (expected exact, asymptotic or quadrature)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Linear,
    Log,
}

impl Grid {
    pub fn as_str(self) -> &'static str {
        match self {
            Grid::Linear => "linear",
            Grid::Log => "log",
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(Grid::Linear),
            "log" => Ok(Grid::Log),
            _ => Err(format!("unknown grid '{s}' (expected linear or log)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub tau: f64,
    pub p: f64,
    pub kappa: Option<f64>,
    pub gamma_ratio: Option<f64>,
    pub re_h: Option<f64>,
    pub im_h: Option<f64>,
    pub method: Method,
}

impl ScanRow {
    /// Time in lifetimes `ħ/γ₀`; identical to `tau`.
    pub fn t_over_lifetime(&self) -> f64 {
        self.tau
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    pub grid: Grid,
    pub method: Method,
    /// Series terms for [`Method::Asymptotic`], 1..=5. The amplitude series
    /// stops at four terms, so 5 uses four there.
    pub terms: usize,
    pub quadrature: QuadratureSettings,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            tau_min: 0.01,
            tau_max: 40.0,
            points: 500,
            grid: Grid::Log,
            method: Method::Exact,
            terms: 4,
            quadrature: QuadratureSettings::default(),
        }
    }
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.tau_min, self.tau_max);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain("tau range must be finite"));
        }
        if lo < 0.0 {
            return Err(Error::domain(format!("tau-min must be non-negative, got {lo}")));
        }
        if lo == 0.0 && self.method != Method::Exact {
            return Err(Error::domain(format!(
                "tau-min = 0 is only available with the exact method, not {}",
                self.method
            )));
        }
        if lo == 0.0 && self.grid == Grid::Log {
            return Err(Error::domain("a log grid needs tau-min > 0"));
        }
        if !(hi > lo) {
            return Err(Error::domain(format!("tau-max ({hi}) must exceed tau-min ({lo})")));
        }
        if self.points < 2 {
            return Err(Error::domain(format!("need at least 2 points, got {}", self.points)));
        }
        if self.terms == 0 || self.terms > MAX_ORDER {
            return Err(Error::domain(format!("terms must be in 1..={MAX_ORDER}, got {}", self.terms)));
        }
        if self.method == Method::Quadrature {
            self.quadrature.validate()?;
        }
        Ok(())
    }

    pub fn grid_points(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.tau_min;
                }
                if k == n - 1 {
                    return self.tau_max;
                }
                let s = k as f64 / last;
                match self.grid {
                    Grid::Linear => self.tau_min + (self.tau_max - self.tau_min) * s,
                    Grid::Log => (self.tau_min.ln() * (1.0 - s) + self.tau_max.ln() * s).exp(),
                }
            })
            .collect()
    }
}

/// Row from `h/γ₀` measured from `E_min`; `None` leaves the energy and rate fields empty.
fn row_from_h(beta: f64, tau: f64, p: f64, h: Option<Complex64>, method: Method) -> ScanRow {
    ScanRow {
        tau,
        p,
        kappa: h.map(|h| h.re / beta),
        gamma_ratio: h.map(|h| -2.0 * h.im),
        re_h: h.map(|h| h.re),
        im_h: h.map(|h| h.im),
        method,
    }
}

pub fn evaluate_row(model: &BreitWignerModel, tau: f64, spec: &ScanSpec) -> Result<ScanRow> {
    let beta = model.beta();
    match spec.method {
        Method::Exact => {
            let p = exact::survival_probability(model, tau)?;
            if tau == 0.0 {
                return Ok(row_from_h(beta, tau, p, None, Method::Exact));
            }
            let h = match exact::reduced_hamiltonian(beta, tau) {
                Ok(h) => Some(h),
                Err(Error::NearZeroAmplitude { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(row_from_h(beta, tau, p, h, Method::Exact))
        }
        Method::Quadrature => {
            let s = &spec.quadrature;
            let i = quad::i_by_quadrature(beta, tau, s)?;
            let j = quad::j_by_quadrature(beta, tau, s)?;
            let p = (model.normalization() / (2.0 * std::f64::consts::PI) * i.norm()).powi(2);
            Ok(row_from_h(beta, tau, p, Some(beta + j / i), Method::Quadrature))
        }
        Method::Asymptotic => {
            let a = amplitude_late(model, tau, spec.terms.min(MAX_AMPLITUDE_ORDER))?;
            let r = ratio_series(beta, tau, spec.terms)?;
            Ok(row_from_h(beta, tau, a.value.norm_sqr(), Some(beta + r.value), Method::Asymptotic))
        }
    }
}

/// Evaluates the whole grid, in parallel, returning rows in grid order.
pub fn run_scan(model: &BreitWignerModel, spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    spec.grid_points()
        .par_iter()
        .map(|&tau| evaluate_row(model, tau, spec))
        .collect()
}

/// Optional descriptive header; carries no timestamp so output stays reproducible.
pub fn metadata_line(model: &BreitWignerModel, spec: &ScanSpec) -> String {
    let mut line = format!(
        "# beta={:.16e} normalization={:.16e} e0={} gamma0={} emin={} hbar={} method={} grid={} points={} tau_min={} tau_max={}",
        model.beta(),
        model.normalization(),
        model.e0(),
        model.gamma0(),
        model.emin(),
        model.hbar(),
        spec.method,
        spec.grid,
        spec.points,
        spec.tau_min,
        spec.tau_max
    );
    if spec.method == Method::Asymptotic {
        line.push_str(&format!(" terms={}", spec.terms));
    }
    line
}

fn render_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn render_optional(v: Option<f64>) -> String {
    v.map(render_float).unwrap_or_default()
}

pub fn write_csv<W: Write>(out: W, rows: &[ScanRow], metadata: Option<&str>) -> std::io::Result<()> {
    let mut out = out;
    if let Some(m) = metadata {
        writeln!(out, "{m}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            render_float(r.tau),
            render_float(r.p),
            render_optional(r.kappa),
            render_optional(r.gamma_ratio),
            render_optional(r.re_h),
            render_optional(r.im_h),
            r.method.as_str().to_string(),
        ])?;
    }
    w.flush()
}

pub fn to_csv_string(rows: &[ScanRow], metadata: Option<&str>) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows, metadata).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_float(field: &str, name: &str, line: usize) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|e| parse_error(line, format!("{name}: '{field}': {e}")))
}

fn parse_optional(field: &str, name: &str, line: usize) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_float(field, name, line).map(Some)
    }
}

/// Parses CSV produced by [`write_csv`]. Lines starting with `#` are skipped.
pub fn parse_csv(input: &str) -> Result<Vec<ScanRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input.as_bytes());
    let header_line = |pos: Option<&csv::Position>| pos.map(|p| p.line() as usize).unwrap_or(0);
    let headers = reader
        .headers()
        .map_err(|e| parse_error(header_line(e.position()), e.to_string()))?
        .clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(parse_error(
            1,
            format!("expected header '{}', got '{}'", CSV_HEADER.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(header_line(e.position()), e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let f = |k: usize| record.get(k).unwrap_or("");
        let method = f(6).parse::<Method>().map_err(|e| parse_error(line, e))?;
        rows.push(ScanRow {
            tau: parse_float(f(0), "tau", line)?,
            p: parse_float(f(1), "p", line)?,
            kappa: parse_optional(f(2), "kappa", line)?,
            gamma_ratio: parse_optional(f(3), "gamma_ratio", line)?,
            re_h: parse_optional(f(4), "re_h", line)?,
            im_h: parse_optional(f(5), "im_h", line)?,
            method,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
    pub rows: Vec<ScanRow>,
}

pub fn to_json_string(rows: &[ScanRow], metadata: Option<&str>) -> String {
    let doc = ScanDocument {
        metadata: metadata.map(str::to_string),
        rows: rows.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("scan rows serialize")
}

pub fn parse_json(input: &str) -> Result<ScanDocument> {
    serde_json::from_str(input).map_err(|e| parse_error(e.line(), e.to_string()))
}
