//! Sequential fat-shattering and Littlestone dimension.
//!
//! `d(S)` for a set `S` of still-available hypotheses is the largest `1 +
//! min(d(low), d(high))` over points `x` and values `a`, where `low = {h in
//! S : h(x) <= a}` and `high = {h in S : h(x) >= a + gamma}`; the node
//! threshold is the midpoint between `a` and the least high value, which
//! leaves `gamma/2` on both sides. Results are memoized per set.

use std::collections::HashMap;

use super::{check_concept, check_gamma, distinct_values, floor_log2, TreeShatterWitness};
use crate::bitset::BitSet;
use crate::class::HypothesisClass;
use crate::error::Result;
use crate::rational::Rat;
use crate::trees::{node_count, BinaryTree};

struct Split {
    low: BitSet,
    high: BitSet,
    threshold: Rat,
}

struct SeqDp<'a> {
    h: &'a HypothesisClass,
    /// per point: candidate splits over the full class
    splits: Vec<Vec<Split>>,
    memo: HashMap<BitSet, u32>,
}

impl<'a> SeqDp<'a> {
    fn new(h: &'a HypothesisClass, gamma: Rat) -> Self {
        let ny = h.n_y();
        let splits = (0..h.n_x())
            .map(|x| {
                let vals = distinct_values(h, x);
                vals.iter()
                    .filter_map(|&a| {
                        let b = *vals.iter().find(|&&v| v >= a + gamma)?;
                        Some(Split {
                            low: BitSet::from_indices(ny, (0..ny).filter(|&y| h.value(x, y) <= a)),
                            high: BitSet::from_indices(ny, (0..ny).filter(|&y| h.value(x, y) >= b)),
                            threshold: a.midpoint(b),
                        })
                    })
                    .collect()
            })
            .collect();
        SeqDp { h, splits, memo: HashMap::new() }
    }

    fn d(&mut self, s: &BitSet) -> u32 {
        let n = s.count();
        if n <= 1 {
            return 0;
        }
        if let Some(&v) = self.memo.get(s) {
            return v;
        }
        let bound = floor_log2(n);
        let mut best = 0;
        'outer: for x in 0..self.h.n_x() {
            for i in 0..self.splits[x].len() {
                let low = s.and(&self.splits[x][i].low);
                let high = s.and(&self.splits[x][i].high);
                let (nl, nh) = (low.count(), high.count());
                if nl == 0 || nh == 0 || 1 + floor_log2(nl.min(nh)) <= best {
                    continue;
                }
                let (small, large) = if nl <= nh { (low, high) } else { (high, low) };
                let ds = self.d(&small);
                if 1 + ds <= best {
                    continue;
                }
                let v = 1 + ds.min(self.d(&large));
                if v > best {
                    best = v;
                    if best == bound {
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert(s.clone(), best);
        best
    }

    fn build(&mut self, s: &BitSet, depth: u32, node: usize, w: &mut Builder) {
        if depth == 0 {
            // node is a leaf position: node - (2^D - 1) is the branch index
            w.branches[node - w.internal] = s.first().unwrap();
            return;
        }
        for x in 0..self.h.n_x() {
            for i in 0..self.splits[x].len() {
                let low = s.and(&self.splits[x][i].low);
                let high = s.and(&self.splits[x][i].high);
                if low.is_empty() || high.is_empty() {
                    continue;
                }
                if self.d(&low) + 1 >= depth && self.d(&high) + 1 >= depth {
                    w.nodes[node] = x;
                    w.thresholds[node] = self.splits[x][i].threshold;
                    self.build(&low, depth - 1, 2 * node + 1, w);
                    self.build(&high, depth - 1, 2 * node + 2, w);
                    return;
                }
            }
        }
        unreachable!("memoized value guarantees a split");
    }
}

struct Builder {
    internal: usize,
    nodes: Vec<usize>,
    thresholds: Vec<Rat>,
    branches: Vec<usize>,
}

fn solve(h: &HypothesisClass, gamma: Rat) -> (usize, TreeShatterWitness) {
    let mut dp = SeqDp::new(h, gamma);
    let full = BitSet::full(h.n_y());
    let d = dp.d(&full);
    let internal = node_count(d as usize);
    let mut b = Builder {
        internal,
        nodes: vec![0; internal],
        thresholds: vec![Rat::ZERO; internal],
        branches: vec![0; 1 << d],
    };
    dp.build(&full, d, 0, &mut b);
    let depth = d as usize;
    (
        depth,
        TreeShatterWitness {
            gamma,
            nodes: BinaryTree::new(depth, b.nodes).unwrap(),
            thresholds: BinaryTree::new(depth, b.thresholds).unwrap(),
            branches: b.branches,
        },
    )
}

pub fn seq_fat_dim(h: &HypothesisClass, gamma: Rat) -> Result<(usize, TreeShatterWitness)> {
    check_gamma(gamma)?;
    Ok(solve(h, gamma))
}

/// Littlestone dimension; the witness is a tree shattered at scale 1 with
/// all thresholds 1/2.
pub fn littlestone_dim(c: &HypothesisClass) -> Result<(usize, TreeShatterWitness)> {
    check_concept(c)?;
    Ok(solve(c, Rat::ONE))
}
