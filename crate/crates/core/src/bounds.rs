//! Closed-form sample-complexity and regret bounds, in floating point.
//!
//! Asymptotic bounds take an explicit constant `c` (1 when unknown). All logs
//! are natural and `ln^2 x` means `(ln x)^2`. A log argument at or below 1
//! that would make a bound vacuous is reported as [`Error::BadRange`].

use std::collections::BTreeMap;
use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    pub formula: String,
    /// intermediate quantities, in evaluation order
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<(String, f64)>,
}

impl BoundReport {
    pub fn new(name: &str, inputs: &[(&str, f64)], value: f64, formula: &str) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::BadRange(format!("{name} evaluates to {value}")));
        }
        Ok(BoundReport {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            formula: formula.to_string(),
            stages: vec![],
        })
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadRange(msg.into())
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(bad(format!("{name} = {v} must lie in (0,1)")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} = {v} must be finite and >= 0")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} = {v} must be finite and > 0")))
    }
}

fn log_arg(name: &str, v: f64) -> Result<f64> {
    if v > 1.0 {
        Ok(v.ln())
    } else {
        Err(bad(format!("log argument {name} = {v} <= 1")))
    }
}

/// `c (1/eps^2) (dim ln^2(1/eps) + ln(1/delta))`.
pub fn fat_pac_bound(dim: f64, eps: f64, delta: f64, c: f64) -> Result<f64> {
    open_unit("eps", eps)?;
    open_unit("delta", delta)?;
    non_negative("dim", dim)?;
    positive("c", c)?;
    let l = (1.0 / eps).ln();
    Ok(c / (eps * eps) * (dim * l * l + (1.0 / delta).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Real,
    Concept,
}

/// Real-valued: `c (d/eps^4 ln^2(d/eps) + (1/eps^2) ln(1/delta))`;
/// concept: `c (1/eps^2)(d ln(d/eps) + ln(1/delta))`.
pub fn expectation_pac_bound(d: f64, eps: f64, delta: f64, kind: ClassKind, c: f64) -> Result<f64> {
    open_unit("eps", eps)?;
    open_unit("delta", delta)?;
    positive("c", c)?;
    non_negative("d", d)?;
    let l = log_arg("d/eps", d / eps)?;
    let conf = (1.0 / delta).ln();
    Ok(match kind {
        ClassKind::Real => c * (d / eps.powi(4) * l * l + conf / (eps * eps)),
        ClassKind::Concept => c / (eps * eps) * (d * l + conf),
    })
}

/// `(2 R_n / n + delta, exp(-n delta^2 / 2))`.
pub fn gc_rademacher_bound(n: f64, r_n: f64, delta: f64) -> Result<(f64, f64)> {
    if n < 1.0 {
        return Err(bad(format!("n = {n} < 1")));
    }
    non_negative("R_n", r_n)?;
    positive("delta", delta)?;
    Ok((2.0 * r_n / n + delta, (-n * delta * delta / 2.0).exp()))
}

/// `N + (8/eps^2) ln(1/delta)`; `delta = 1` is allowed and gives `N`.
pub fn gc_expectation_bound(big_n: f64, eps: f64, delta: f64) -> Result<f64> {
    non_negative("N", big_n)?;
    open_unit("eps", eps)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(bad(format!("delta = {delta} must lie in (0,1]")));
    }
    Ok(big_n + 8.0 / (eps * eps) * (1.0 / delta).ln())
}

/// `2 sqrt(d n ln(n+1))`.
pub fn vc_rademacher(d: f64, n: f64) -> Result<f64> {
    non_negative("d", d)?;
    non_negative("n", n)?;
    Ok(2.0 * (d * n * (n + 1.0).ln()).sqrt())
}

/// Natural log of [`covering_fat_bound`]:
/// `ln 2 + d ln(2en/(d gamma)) ln(4n/gamma^2)`.
pub fn ln_covering_fat_bound(d: f64, gamma: f64, n: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(bad(format!("gamma = {gamma} must lie in (0,1]")));
    }
    if d < 1.0 || n < 1.0 {
        return Err(bad(format!("d = {d} and n = {n} must be >= 1")));
    }
    let expo = d * log_arg("2en/(d gamma)", 2.0 * E * n / (d * gamma))?;
    Ok(2f64.ln() + expo * (4.0 * n / (gamma * gamma)).ln())
}

/// `2 (4n/gamma^2)^{d ln(2en/(d gamma))}`.
pub fn covering_fat_bound(d: f64, gamma: f64, n: f64) -> Result<f64> {
    let v = ln_covering_fat_bound(d, gamma, n)?.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad("covering bound overflows f64; use the log form"))
    }
}

/// Sequential fat-shattering table, sorted by scale, with `d(beta)` read
/// at the largest listed scale not above `beta`.
fn table_lookup(table: &[(f64, f64)], beta: f64) -> Option<f64> {
    table.iter().rev().find(|(g, _)| *g <= beta).map(|(_, d)| *d)
}

const TRAPEZOID_STEPS: usize = 4000;

fn integral(table: &[(f64, f64)], gamma: f64, t: f64) -> f64 {
    // split [gamma, 1] at the table scales so every piece has constant d
    let mut cuts: Vec<f64> = vec![gamma, 1.0];
    cuts.extend(table.iter().map(|(g, _)| *g).filter(|&g| g > gamma && g < 1.0));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let f = |beta: f64, d: f64| (d * (2.0 * E * t / beta).ln()).sqrt();
    cuts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let d = table_lookup(table, a).unwrap_or(0.0);
            let h = (b - a) / TRAPEZOID_STEPS as f64;
            let inner: f64 = (1..TRAPEZOID_STEPS).map(|i| f(a + i as f64 * h, d)).sum();
            h * (0.5 * (f(a, d) + f(b, d)) + inner)
        })
        .sum()
}

/// Lower bound `(1/(4 sqrt 2)) sup_gamma min(sqrt(d T), T)` and upper bound
/// `min_gamma 4 gamma T + 12 sqrt(T) int_gamma^1 sqrt(d(beta) ln(2eT/beta))
/// dbeta` over the grid. Grid scales below the smallest table scale are
/// skipped; an empty grid means the table scales.
pub fn regret_bounds(table: &[(f64, f64)], t: f64, grid: &[f64]) -> Result<(f64, f64)> {
    if table.is_empty() {
        return Err(Error::BadTable("empty table".into()));
    }
    if t < 1.0 {
        return Err(bad(format!("T = {t} < 1")));
    }
    let mut tab = table.to_vec();
    if tab.iter().any(|(g, d)| !(*g > 0.0 && *g <= 1.0) || !(*d >= 0.0)) {
        return Err(Error::BadTable("scales must lie in (0,1] and dimensions be >= 0".into()));
    }
    tab.sort_by(|a, b| a.0.total_cmp(&b.0));
    if tab.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::BadTable("repeated scale".into()));
    }
    let lower = tab.iter().map(|(_, d)| (d * t).sqrt().min(t)).fold(0.0, f64::max) / (4.0 * 2f64.sqrt());
    let grid: Vec<f64> = if grid.is_empty() { tab.iter().map(|p| p.0).collect() } else { grid.to_vec() };
    let upper = grid
        .iter()
        .filter(|&&g| g > 0.0 && g <= 1.0 && g >= tab[0].0)
        .map(|&g| 4.0 * g * t + 12.0 * t.sqrt() * integral(&tab, g, t))
        .fold(f64::INFINITY, f64::min);
    if !upper.is_finite() {
        return Err(Error::BadTable("no grid scale at or above the smallest table scale".into()));
    }
    Ok((lower, upper))
}

/// `4 gamma n + 12 (1 - gamma) sqrt(d n ln(2en/gamma))`.
pub fn expectation_regret_bound(d: f64, gamma: f64, n: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(bad(format!("gamma = {gamma} must lie in (0,1]")));
    }
    non_negative("d", d)?;
    if n < 1.0 {
        return Err(bad(format!("n = {n} < 1")));
    }
    Ok(4.0 * gamma * n + 12.0 * (1.0 - gamma) * (d * n * (2.0 * E * n / gamma).ln()).sqrt())
}

/// `c sqrt(d T)`.
pub fn littlestone_regret(d: f64, t: f64, c: f64) -> f64 {
    c * (d.max(0.0) * t.max(0.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JVariant {
    Linear,
    Quadratic,
}

/// `25 m^p d* (ln 90 + ln m + ln d*)^2` with `p = 1` (linear) or `p = 2`.
pub fn aggregation_j(m: f64, d_star: f64, variant: JVariant) -> Result<f64> {
    if m < 1.0 || d_star < 1.0 {
        return Err(bad(format!("m = {m} and d* = {d_star} must be >= 1")));
    }
    let l = 90f64.ln() + m.ln() + d_star.ln();
    let mm = match variant {
        JVariant::Linear => m,
        JVariant::Quadratic => m * m,
    };
    Ok(25.0 * mm * d_star * l * l)
}

/// Three-stage bound for the dual distribution class of a concept class:
/// approximation size `n_k = L' d / gamma^2`, the fat-shattering bound
/// `J(n_k, d*)`, then the sample bound
/// `(1/eps^2)[d d* / (eps/9)^2 ln^2(1/eps) + ln(1/delta)]` with `eps = gamma`.
pub fn dual_dist_chain(d: f64, d_star: f64, gamma: f64, l_prime: f64, delta: f64, variant: JVariant) -> Result<BoundReport> {
    positive("d", d)?;
    positive("d*", d_star)?;
    positive("L'", l_prime)?;
    open_unit("gamma", gamma)?;
    open_unit("delta", delta)?;
    let n_k = l_prime * d / (gamma * gamma);
    let j = aggregation_j(n_k.max(1.0), d_star, variant)?;
    let eps = gamma;
    let l = (1.0 / eps).ln();
    let fin = 1.0 / (eps * eps) * (d * d_star / (eps / 9.0).powi(2) * l * l + (1.0 / delta).ln());
    let mut r = BoundReport::new(
        "dual_dist_chain",
        &[("d", d), ("d_star", d_star), ("gamma", gamma), ("L_prime", l_prime), ("delta", delta)],
        fin,
        "(1/eps^2)[d d*/(eps/9)^2 ln^2(1/eps) + ln(1/delta)], eps = gamma",
    )?;
    r.stages = vec![("n_k".into(), n_k), ("J".into(), j), ("sample_bound".into(), fin)];
    Ok(r)
}

/// `eps^{-(lambda+1)}`.
pub fn sigmod_baseline(lambda: f64, eps: f64) -> Result<f64> {
    non_negative("lambda", lambda)?;
    open_unit("eps", eps)?;
    Ok(eps.powf(-(lambda + 1.0)))
}
