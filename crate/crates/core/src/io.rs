//! JSON file layouts that reference a class by label or index, and small
//! text parsers shared by the command line and the C interface.

use serde::{Deserialize, Serialize};

use crate::class::{Axis, Distribution, HypothesisClass};
use crate::error::{Error, Result};
use crate::pacsim::{SampleDistribution, SamplePoint};
use crate::rational::Rat;

/// A point or parameter given either by position or by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref {
    Index(usize),
    Label(String),
}

impl Ref {
    pub fn resolve(&self, h: &HypothesisClass, axis: Axis) -> Result<usize> {
        let (labels, name) = match axis {
            Axis::X => (h.x_labels(), "x"),
            Axis::Y => (h.y_labels(), "y"),
        };
        match self {
            Ref::Index(i) if *i < labels.len() => Ok(*i),
            Ref::Index(i) => Err(Error::IndexError(format!("{name} index {i} >= {}", labels.len()))),
            Ref::Label(l) => labels
                .iter()
                .position(|s| s == l)
                .ok_or_else(|| Error::IndexError(format!("unknown {name} label {l:?}"))),
        }
    }
}

/// `{"over": "x"|"y", "support": [...], "weights": ["1/2", ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionFile {
    #[serde(default)]
    pub over: Option<Axis>,
    pub support: Vec<Ref>,
    pub weights: Vec<Rat>,
}

impl DistributionFile {
    /// Resolves against `h`; `over` must match `axis` when it is given.
    pub fn resolve(&self, h: &HypothesisClass, axis: Axis) -> Result<Distribution> {
        if let Some(o) = self.over {
            if o != axis {
                return Err(Error::BadDistribution(format!("distribution is over {o:?}, expected {axis:?}")));
            }
        }
        let support = self.support.iter().map(|r| r.resolve(h, axis)).collect::<Result<_>>()?;
        Distribution::new(support, self.weights.clone())
    }

    pub fn from_distribution(d: &Distribution, axis: Axis) -> Self {
        DistributionFile {
            over: Some(axis),
            support: d.support().iter().map(|&i| Ref::Index(i)).collect(),
            weights: d.weights().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomFile {
    pub x: Ref,
    pub y: Rat,
    pub w: Rat,
}

/// `{"atoms": [{"x": 0, "y": "1/2", "w": "1/4"}, ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFile {
    pub atoms: Vec<AtomFile>,
}

impl SampleFile {
    pub fn resolve(&self, h: &HypothesisClass) -> Result<SampleDistribution> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok((SamplePoint { x: a.x.resolve(h, Axis::X)?, y: a.y }, a.w)))
            .collect::<Result<_>>()?;
        SampleDistribution::new(atoms)
    }
}

/// Comma-separated rationals, e.g. `0,1/2,1`.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
}

/// Comma-separated indices.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

/// `a:b` pairs separated by commas, e.g. `0:1,1/2:1/4`.
pub fn parse_pairs<A, B>(s: &str, fa: impl Fn(&str) -> Result<A>, fb: impl Fn(&str) -> Result<B>) -> Result<Vec<(A, B)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| Error::Parse(format!("expected a:b, got {t:?}")))?;
            Ok((fa(a.trim())?, fb(b.trim())?))
        })
        .collect()
}

/// Semicolon-separated index tuples, e.g. `0,1;1,2`.
pub fn parse_tuples(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_index_list).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::interval_class;
    use crate::rational::r;

    #[test]
    fn distribution_by_label() {
        let h = interval_class(3).unwrap();
        let f: DistributionFile =
            serde_json::from_str(r#"{"over":"y","support":["[1,2]",0],"weights":["1/3","2/3"]}"#).unwrap();
        let d = f.resolve(&h, Axis::Y).unwrap();
        assert_eq!(d.support(), &[1, 0]);
        assert!(f.resolve(&h, Axis::X).is_err());
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_rat_list("0, 1/2,1").unwrap(), vec![Rat::ZERO, r(1, 2), Rat::ONE]);
        assert_eq!(parse_tuples("0,1;2").unwrap(), vec![vec![0, 1], vec![2]]);
        let p = parse_pairs("1/2:3", |a| a.parse::<Rat>(), |b| b.parse::<Rat>()).unwrap();
        assert_eq!(p, vec![(r(1, 2), Rat::int(3))]);
        assert!(parse_index_list("1,x").is_err());
    }
}
