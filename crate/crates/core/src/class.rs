//! Finite hypothesis classes and the derived-class constructions.
//!
//! A [`HypothesisClass`] is a `|X| x |Y|` matrix of exact rationals in `[0,1]`:
//! row `x` holds the values `h_y(x)` of every hypothesis at the point `x`.
//! All constructions here are pure and return freshly validated classes.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ClassFile", into = "ClassFile")]
pub struct HypothesisClass {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    values: Vec<Vec<Rat>>,
}

/// On-disk JSON layout: `{"x": [...], "y": [...], "values": [["n/d", ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassFile {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub values: Vec<Vec<Rat>>,
}

impl TryFrom<ClassFile> for HypothesisClass {
    type Error = Error;
    fn try_from(f: ClassFile) -> Result<Self> {
        HypothesisClass::new(f.x, f.y, f.values)
    }
}

impl From<HypothesisClass> for ClassFile {
    fn from(h: HypothesisClass) -> Self {
        ClassFile { x: h.x_labels, y: h.y_labels, values: h.values }
    }
}

fn check_unique(labels: &[String], axis: &str) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::DimensionMismatch(format!("{axis} label list is empty")));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(format!("{axis}: {l}")));
        }
    }
    Ok(())
}

impl HypothesisClass {
    /// Validates labels, shape, and the `[0,1]` range of every entry.
    pub fn new(x_labels: Vec<String>, y_labels: Vec<String>, values: Vec<Vec<Rat>>) -> Result<Self> {
        check_unique(&x_labels, "x")?;
        check_unique(&y_labels, "y")?;
        if values.len() != x_labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for {} x labels",
                values.len(),
                x_labels.len()
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != y_labels.len() {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries for {} y labels",
                    row.len(),
                    y_labels.len()
                )));
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !v.in_unit_interval()) {
                return Err(Error::ValueOutOfRange(format!(
                    "{v} at ({}, {})",
                    x_labels[i], y_labels[j]
                )));
            }
        }
        Ok(HypothesisClass { x_labels, y_labels, values })
    }

    /// Builds a class from a value function `f(x, y)`.
    pub fn from_fn(
        x_labels: Vec<String>,
        y_labels: Vec<String>,
        mut f: impl FnMut(usize, usize) -> Rat,
    ) -> Result<Self> {
        let values = (0..x_labels.len())
            .map(|x| (0..y_labels.len()).map(|y| f(x, y)).collect())
            .collect();
        HypothesisClass::new(x_labels, y_labels, values)
    }

    pub fn n_x(&self) -> usize {
        self.x_labels.len()
    }

    pub fn n_y(&self) -> usize {
        self.y_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn values(&self) -> &[Vec<Rat>] {
        &self.values
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> Rat {
        self.values[x][y]
    }

    pub fn row(&self, x: usize) -> &[Rat] {
        &self.values[x]
    }

    /// The hypothesis `h_y` as a vector over `X`.
    pub fn column(&self, y: usize) -> Vec<Rat> {
        self.values.iter().map(|row| row[y]).collect()
    }

    pub fn is_concept(&self) -> bool {
        self.values
            .iter()
            .flatten()
            .all(|v| *v == Rat::ZERO || *v == Rat::ONE)
    }

    pub fn x_index(&self, label: &str) -> Option<usize> {
        self.x_labels.iter().position(|l| l == label)
    }

    pub fn y_index(&self, label: &str) -> Option<usize> {
        self.y_labels.iter().position(|l| l == label)
    }

    /// Keeps only the listed hypotheses, in the given order.
    pub fn restrict_y(&self, ys: &[usize]) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::EmptyClass);
        }
        for &y in ys {
            if y >= self.n_y() {
                return Err(Error::IndexError(format!("y index {y} >= {}", self.n_y())));
            }
        }
        let y_labels = ys.iter().map(|&y| self.y_labels[y].clone()).collect();
        HypothesisClass::from_fn(self.x_labels.clone(), y_labels, |x, j| self.values[x][ys[j]])
    }

    /// Keeps only the listed points, in the given order.
    pub fn restrict_x(&self, xs: &[usize]) -> Result<Self> {
        for &x in xs {
            if x >= self.n_x() {
                return Err(Error::IndexError(format!("x index {x} >= {}", self.n_x())));
            }
        }
        let x_labels = xs.iter().map(|&x| self.x_labels[x].clone()).collect();
        HypothesisClass::from_fn(x_labels, self.y_labels.clone(), |i, y| self.values[xs[i]][y])
    }
}

/// Which label list a distribution lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// A finitely supported probability distribution over indices of a label list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    support: Vec<usize>,
    weights: Vec<Rat>,
}

impl Distribution {
    pub fn new(support: Vec<usize>, weights: Vec<Rat>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::BadDistribution(format!(
                "support has {} entries, weights {}",
                support.len(),
                weights.len()
            )));
        }
        let mut seen = HashSet::new();
        for &i in &support {
            if !seen.insert(i) {
                return Err(Error::BadDistribution(format!("repeated support index {i}")));
            }
        }
        if let Some(w) = weights.iter().find(|w| **w <= Rat::ZERO) {
            return Err(Error::BadDistribution(format!("non-positive weight {w}")));
        }
        let total: Rat = weights.iter().sum();
        if total != Rat::ONE {
            return Err(Error::BadDistribution(format!("weights sum to {total}")));
        }
        Ok(Distribution { support, weights })
    }

    pub fn point_mass(i: usize) -> Self {
        Distribution { support: vec![i], weights: vec![Rat::ONE] }
    }

    pub fn uniform(support: Vec<usize>) -> Result<Self> {
        let n = support.len() as i128;
        if n == 0 {
            return Err(Error::BadDistribution("empty support".into()));
        }
        Distribution::new(support, vec![Rat::new(1, n); n as usize])
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Rat)> + '_ {
        self.support.iter().copied().zip(self.weights.iter().copied())
    }

    fn check_range(&self, len: usize) -> Result<()> {
        match self.support.iter().find(|&&i| i >= len) {
            Some(&index) => Err(Error::SupportOutOfRange { index, len }),
            None => Ok(()),
        }
    }

    /// `E_mu[f]` for a function given as a slice over the label list.
    pub fn expect(&self, f: &[Rat]) -> Result<Rat> {
        self.check_range(f.len())?;
        Ok(self.iter().map(|(i, w)| w * f[i]).sum())
    }
}

/// A finite weighted family of classes sharing `X` and `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurableFamily {
    omega_weights: Vec<Rat>,
    classes: Vec<HypothesisClass>,
}

impl MeasurableFamily {
    pub fn new(omega_weights: Vec<Rat>, classes: Vec<HypothesisClass>) -> Result<Self> {
        if classes.is_empty() || omega_weights.len() != classes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} classes",
                omega_weights.len(),
                classes.len()
            )));
        }
        if let Some(w) = omega_weights.iter().find(|w| **w <= Rat::ZERO) {
            return Err(Error::BadDistribution(format!("non-positive weight {w}")));
        }
        let total: Rat = omega_weights.iter().sum();
        if total != Rat::ONE {
            return Err(Error::BadDistribution(format!("weights sum to {total}")));
        }
        let first = &classes[0];
        for c in &classes[1..] {
            if c.x_labels != first.x_labels || c.y_labels != first.y_labels {
                return Err(Error::DimensionMismatch(
                    "family members must share x and y labels".into(),
                ));
            }
        }
        Ok(MeasurableFamily { omega_weights, classes })
    }

    pub fn weights(&self) -> &[Rat] {
        &self.omega_weights
    }

    pub fn classes(&self) -> &[HypothesisClass] {
        &self.classes
    }
}

/// Increasing piecewise-linear bijection of `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneMap {
    breakpoints: Vec<(Rat, Rat)>,
}

impl MonotoneMap {
    pub fn new(breakpoints: Vec<(Rat, Rat)>) -> Result<Self> {
        let bad = |m: &str| Err(Error::BadMonotoneMap(m.to_string()));
        if breakpoints.len() < 2 {
            return bad("need at least the endpoints (0,0) and (1,1)");
        }
        if breakpoints[0] != (Rat::ZERO, Rat::ZERO) {
            return bad("first breakpoint must be (0,0)");
        }
        if *breakpoints.last().unwrap() != (Rat::ONE, Rat::ONE) {
            return bad("last breakpoint must be (1,1)");
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return bad("inputs and outputs must be strictly increasing");
            }
        }
        Ok(MonotoneMap { breakpoints })
    }

    pub fn identity() -> Self {
        MonotoneMap { breakpoints: vec![(Rat::ZERO, Rat::ZERO), (Rat::ONE, Rat::ONE)] }
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    pub fn eval(&self, v: Rat) -> Rat {
        let bp = &self.breakpoints;
        let i = bp.partition_point(|(x, _)| *x < v);
        if i < bp.len() && bp[i].0 == v {
            return bp[i].1;
        }
        // v lies strictly between bp[i-1].0 and bp[i].0
        let (x0, y0) = bp[i - 1];
        let (x1, y1) = bp[i];
        y0 + (y1 - y0) * (v - x0) / (x1 - x0)
    }
}

/// Transposes the matrix and swaps the label lists.
pub fn dual(h: &HypothesisClass) -> HypothesisClass {
    let values = (0..h.n_y()).map(|y| h.column(y)).collect();
    HypothesisClass {
        x_labels: h.y_labels.clone(),
        y_labels: h.x_labels.clone(),
        values,
    }
}

pub fn compose_monotone(h: &HypothesisClass, f: &MonotoneMap) -> HypothesisClass {
    HypothesisClass {
        x_labels: h.x_labels.clone(),
        y_labels: h.y_labels.clone(),
        values: h
            .values
            .iter()
            .map(|row| row.iter().map(|&v| f.eval(v)).collect())
            .collect(),
    }
}

/// Class on the same `X` whose hypotheses are the mixtures `h_mu = E_{p~mu} h_p`.
pub fn distribution_class(h: &HypothesisClass, mus: &[Distribution]) -> Result<HypothesisClass> {
    mixture_class(h, mus, "mu")
}

/// [`distribution_class`] of the dual: parameters are distributions over `X`.
pub fn dual_distribution_class(h: &HypothesisClass, nus: &[Distribution]) -> Result<HypothesisClass> {
    mixture_class(&dual(h), nus, "nu")
}

fn mixture_class(h: &HypothesisClass, mus: &[Distribution], tag: &str) -> Result<HypothesisClass> {
    if mus.is_empty() {
        return Err(Error::EmptyClass);
    }
    for mu in mus {
        mu.check_range(h.n_y())?;
    }
    let y_labels = (0..mus.len()).map(|i| format!("{tag}[{i}]")).collect();
    HypothesisClass::from_fn(h.x_labels.clone(), y_labels, |x, j| {
        mus[j].iter().map(|(p, w)| w * h.values[x][p]).sum()
    })
}

pub fn expectation_class(f: &MeasurableFamily) -> HypothesisClass {
    let base = &f.classes[0];
    let values = (0..base.n_x())
        .map(|x| {
            (0..base.n_y())
                .map(|y| {
                    f.omega_weights
                        .iter()
                        .zip(&f.classes)
                        .map(|(w, c)| *w * c.values[x][y])
                        .sum()
                })
                .collect()
        })
        .collect();
    HypothesisClass {
        x_labels: base.x_labels.clone(),
        y_labels: base.y_labels.clone(),
        values,
    }
}

/// The averaged dual class: points are the parameters of `h`, and the
/// hypothesis indexed by a tuple `(x_1..x_m)` maps `c` to `(1/m) sum_i h_c(x_i)`.
pub fn avg_class(h: &HypothesisClass, tuples: &[Vec<usize>]) -> Result<HypothesisClass> {
    if tuples.is_empty() {
        return Err(Error::EmptyClass);
    }
    let m = tuples[0].len();
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    for t in tuples {
        if t.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if t.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "tuple of length {} among tuples of length {m}",
                t.len()
            )));
        }
        if let Some(&x) = t.iter().find(|&&x| x >= h.n_x()) {
            return Err(Error::IndexError(format!("x index {x} >= {}", h.n_x())));
        }
    }
    let y_labels = tuples
        .iter()
        .map(|t| {
            let names: Vec<&str> = t.iter().map(|&x| h.x_labels[x].as_str()).collect();
            format!("avg({})", names.join(","))
        })
        .collect::<Vec<_>>();
    // identical tuples produce identical labels; disambiguate by position
    let y_labels = dedupe_labels(y_labels);
    let inv_m = Rat::new(1, m as i128);
    HypothesisClass::from_fn(h.y_labels.clone(), y_labels, |c, j| {
        tuples[j].iter().map(|&x| h.values[x][c]).sum::<Rat>() * inv_m
    })
}

/// Mixtures `lambda h_y + (1 - lambda) h_y'`, one hypothesis per
/// `(lambdas[i], pairs[i])`.
pub fn two_choice_class(
    h: &HypothesisClass,
    lambdas: &[Rat],
    pairs: &[(usize, usize)],
) -> Result<HypothesisClass> {
    if lambdas.len() != pairs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} mixture weights for {} pairs",
            lambdas.len(),
            pairs.len()
        )));
    }
    if lambdas.is_empty() {
        return Err(Error::EmptyClass);
    }
    if let Some(l) = lambdas.iter().find(|l| !l.in_unit_interval()) {
        return Err(Error::LambdaOutOfRange(l.to_string()));
    }
    for &(a, b) in pairs {
        if a >= h.n_y() || b >= h.n_y() {
            return Err(Error::IndexError(format!("pair ({a},{b}) out of range {}", h.n_y())));
        }
    }
    let y_labels = dedupe_labels(
        lambdas
            .iter()
            .zip(pairs)
            .map(|(l, &(a, b))| format!("mix({l},{},{})", h.y_labels[a], h.y_labels[b]))
            .collect(),
    );
    HypothesisClass::from_fn(h.x_labels.clone(), y_labels, |x, j| {
        let (a, b) = pairs[j];
        let l = lambdas[j];
        l * h.values[x][a] + (Rat::ONE - l) * h.values[x][b]
    })
}

fn dedupe_labels(labels: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| if seen.insert(l.clone()) { l } else { format!("{l}#{i}") })
        .collect()
}
