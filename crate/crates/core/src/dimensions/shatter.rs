//! Set shattering by pattern search.
//!
//! Each point offers a list of split options `(low, high, threshold)`. A set
//! of points is shattered when some choice of one option per point leaves
//! every one of the `2^n` low/high patterns with a nonempty hypothesis set.
//! The search extends point sequences in increasing index order, refining
//! the pattern sets and pruning as soon as one becomes empty.

use super::{check_concept, check_gamma, distinct_values, floor_log2, GraphDimWitness, SetShatterWitness};
use crate::bitset::BitSet;
use crate::class::HypothesisClass;
use crate::error::Result;
use crate::rational::Rat;

struct SplitOption {
    low: BitSet,
    high: BitSet,
    threshold: Rat,
}

fn select(h: &HypothesisClass, x: usize, pred: impl Fn(Rat) -> bool) -> BitSet {
    BitSet::from_indices(h.n_y(), (0..h.n_y()).filter(|&y| pred(h.value(x, y))))
}

struct Found {
    points: Vec<usize>,
    options: Vec<usize>,
    patterns: Vec<BitSet>,
}

struct Search<'a> {
    opts: &'a [Vec<SplitOption>],
    cap: usize,
    best: Option<Found>,
    path_points: Vec<usize>,
    path_opts: Vec<usize>,
}

impl Search<'_> {
    fn best_len(&self) -> usize {
        self.best.as_ref().map_or(0, |f| f.points.len())
    }

    fn run(&mut self, start: usize, patterns: &[BitSet]) {
        let depth = self.path_points.len();
        if depth > self.best_len() || self.best.is_none() {
            self.best = Some(Found {
                points: self.path_points.clone(),
                options: self.path_opts.clone(),
                patterns: patterns.to_vec(),
            });
        }
        let n = self.opts.len();
        for x in start..n {
            if self.best_len() >= self.cap || depth + (n - x) <= self.best_len() {
                return;
            }
            for (oi, o) in self.opts[x].iter().enumerate() {
                let mut next = Vec::with_capacity(patterns.len() * 2);
                let mut ok = true;
                for p in patterns {
                    let l = p.and(&o.low);
                    if l.is_empty() {
                        ok = false;
                        break;
                    }
                    next.push(l);
                }
                if !ok {
                    continue;
                }
                for p in patterns {
                    let hi = p.and(&o.high);
                    if hi.is_empty() {
                        ok = false;
                        break;
                    }
                    next.push(hi);
                }
                if !ok {
                    continue;
                }
                self.path_points.push(x);
                self.path_opts.push(oi);
                self.run(x + 1, &next);
                self.path_points.pop();
                self.path_opts.pop();
                if self.best_len() >= self.cap {
                    return;
                }
            }
        }
    }
}

/// Largest shattered set; the pattern for mask `m` sits at `patterns[m]`
/// because new points append their high half after the low half.
fn max_shatter(h: &HypothesisClass, opts: &[Vec<SplitOption>]) -> Found {
    let cap = (floor_log2(h.n_y()) as usize).min(h.n_x());
    let mut s = Search { opts, cap, best: None, path_points: vec![], path_opts: vec![] };
    s.run(0, &[BitSet::full(h.n_y())]);
    s.best.expect("root is always recorded")
}

fn set_witness(gamma: Rat, found: Found, opts: &[Vec<SplitOption>]) -> SetShatterWitness {
    let thresholds = found
        .points
        .iter()
        .zip(&found.options)
        .map(|(&x, &o)| opts[x][o].threshold)
        .collect();
    SetShatterWitness {
        gamma,
        points: found.points,
        thresholds,
        selector: found.patterns.iter().map(|p| p.first().unwrap()).collect(),
    }
}

pub fn vc_dim(c: &HypothesisClass) -> Result<(usize, SetShatterWitness)> {
    check_concept(c)?;
    let half = Rat::new(1, 2);
    let opts: Vec<Vec<SplitOption>> = (0..c.n_x())
        .map(|x| {
            let low = select(c, x, |v| v.is_zero());
            let high = select(c, x, |v| v == Rat::ONE);
            if low.is_empty() || high.is_empty() {
                vec![]
            } else {
                vec![SplitOption { low, high, threshold: half }]
            }
        })
        .collect();
    let found = max_shatter(c, &opts);
    let d = found.points.len();
    Ok((d, set_witness(half, found, &opts)))
}

/// Fat-shattering at margin `gamma`: above means `>= s + gamma`, below
/// `<= s - gamma`. For a split with top low value `a` the best high side is
/// everything `>= a + 2 gamma`, and the midpoint of `a` and the least such
/// value serves as threshold.
pub fn fat_dim(h: &HypothesisClass, gamma: Rat) -> Result<(usize, SetShatterWitness)> {
    check_gamma(gamma)?;
    let gap = gamma + gamma;
    let opts: Vec<Vec<SplitOption>> = (0..h.n_x())
        .map(|x| {
            let vals = distinct_values(h, x);
            vals.iter()
                .filter_map(|&a| {
                    let b = *vals.iter().find(|&&v| v >= a + gap)?;
                    Some(SplitOption {
                        low: select(h, x, |v| v <= a),
                        high: select(h, x, |v| v >= b),
                        threshold: a.midpoint(b),
                    })
                })
                .collect()
        })
        .collect();
    let found = max_shatter(h, &opts);
    let d = found.points.len();
    Ok((d, set_witness(gamma, found, &opts)))
}

/// Graph dimension at scale `gamma`: on a 0-bit the hypothesis equals the
/// target, on a 1-bit it differs by strictly more than `gamma`. Targets
/// range over the values occurring in each row; a target that no hypothesis
/// attains leaves the all-zero pattern empty, so nothing else is needed.
pub fn graph_dim(h: &HypothesisClass, gamma: Rat) -> Result<(usize, GraphDimWitness)> {
    check_gamma(gamma)?;
    let opts: Vec<Vec<SplitOption>> = (0..h.n_x())
        .map(|x| {
            distinct_values(h, x)
                .into_iter()
                .filter_map(|f| {
                    let high = select(h, x, |v| (v - f).abs() > gamma);
                    if high.is_empty() {
                        return None;
                    }
                    Some(SplitOption { low: select(h, x, |v| v == f), high, threshold: f })
                })
                .collect()
        })
        .collect();
    let found = max_shatter(h, &opts);
    let n = found.points.len();
    let w = set_witness(gamma, found, &opts);
    Ok((
        n,
        GraphDimWitness { gamma, points: w.points, targets: w.thresholds, selector: w.selector },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{interval_class, powerset_class, threshold_class};
    use crate::rational::r;
    use crate::trees::{verify_graph_witness, verify_set_shatter};

    fn consts(vals: &[Rat]) -> HypothesisClass {
        HypothesisClass::from_fn(
            vec!["x".into()],
            (0..vals.len()).map(|i| format!("c{i}")).collect(),
            |_, y| vals[y],
        )
        .unwrap()
    }

    #[test]
    fn vc_examples() {
        let (d, w) = vc_dim(&powerset_class(3).unwrap()).unwrap();
        assert_eq!(d, 3);
        assert!(verify_set_shatter(&powerset_class(3).unwrap(), &w, r(1, 2)).unwrap());
        assert_eq!(vc_dim(&threshold_class(6).unwrap()).unwrap().0, 1);
        assert_eq!(vc_dim(&interval_class(5).unwrap()).unwrap().0, 2);
        assert!(vc_dim(&consts(&[r(1, 2)])).is_err());
    }

    #[test]
    fn fat_examples() {
        assert_eq!(fat_dim(&consts(&[r(1, 2)]), r(1, 8)).unwrap().0, 0);
        let c = consts(&[r(1, 5), r(4, 5)]);
        let (d, w) = fat_dim(&c, r(1, 4)).unwrap();
        assert_eq!(d, 1);
        assert!(verify_set_shatter(&c, &w, r(1, 4)).unwrap());
        assert_eq!(fat_dim(&c, r(1, 3)).unwrap().0, 0);
        assert!(fat_dim(&c, Rat::ZERO).is_err());
    }

    #[test]
    fn graph_examples() {
        assert_eq!(graph_dim(&consts(&[r(1, 2)]), r(1, 8)).unwrap().0, 0);
        let p = powerset_class(2).unwrap();
        let (n, w) = graph_dim(&p, r(1, 8)).unwrap();
        assert_eq!(n, 2);
        assert!(verify_graph_witness(&p, &w).unwrap());
    }
}
