//! Threshold dimensions: longest sequences `(x_1,y_1)..(x_n,y_n)` whose
//! every earlier/later pair satisfies the half-graph condition.
//!
//! With `C` the set of pairs compatible with everything chosen so far,
//! `L(C) = max_{q in C} 1 + L(C & succ(q))`, memoized on `C`. In gamma mode
//! the pair condition is symmetric, so only increasing index orders are
//! explored. Points within a sequence are pairwise distinct, and so are
//! hypotheses; this keeps the gamma dimension invariant under duality.

use std::collections::HashMap;

use super::{check_gamma, ThresholdMode, ThresholdWitness};
use crate::bitset::BitSet;
use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::rational::Rat;

struct Chain {
    succ: Vec<BitSet>,
    memo: HashMap<BitSet, u32>,
}

impl Chain {
    fn longest(&mut self, c: &BitSet) -> u32 {
        if c.is_empty() {
            return 0;
        }
        if let Some(&v) = self.memo.get(c) {
            return v;
        }
        let mut best = 1;
        let total = c.count() as u32;
        for q in c.iter() {
            if best >= total {
                break;
            }
            let next = c.and(&self.succ[q]);
            if 1 + next.count() as u32 <= best {
                continue;
            }
            best = best.max(1 + self.longest(&next));
        }
        self.memo.insert(c.clone(), best);
        best
    }

    fn rebuild(&mut self, c: &BitSet, len: u32, out: &mut Vec<usize>) {
        if len == 0 {
            return;
        }
        for q in c.iter() {
            let next = c.and(&self.succ[q]);
            if self.longest(&next) + 1 >= len {
                out.push(q);
                self.rebuild(&next, len - 1, out);
                return;
            }
        }
        unreachable!("memoized length guarantees an extension");
    }
}

fn solve(h: &HypothesisClass, mode: ThresholdMode, ok: impl Fn(usize, usize, usize, usize) -> bool, ordered: bool) -> (usize, ThresholdWitness) {
    let ny = h.n_y();
    let n = h.n_x() * ny;
    let succ = (0..n)
        .map(|q| {
            let (xq, yq) = (q / ny, q % ny);
            let from = if ordered { 0 } else { q + 1 };
            BitSet::from_indices(n, (from..n).filter(|&p| p / ny != xq && p % ny != yq && ok(xq, yq, p / ny, p % ny)))
        })
        .collect();
    let mut chain = Chain { succ, memo: HashMap::new() };
    let all = BitSet::full(n);
    let len = chain.longest(&all);
    let mut seq = Vec::new();
    chain.rebuild(&all, len, &mut seq);
    let pairs = seq.into_iter().map(|q| (q / ny, q % ny)).collect();
    (len as usize, ThresholdWitness { mode, pairs })
}

/// `|h_{y_j}(x_i) - h_{y_i}(x_j)| >= gamma` for all `i < j`.
pub fn threshold_dim_gamma(h: &HypothesisClass, gamma: Rat) -> Result<(usize, ThresholdWitness)> {
    check_gamma(gamma)?;
    let ok = |xi: usize, yi: usize, xj: usize, yj: usize| (h.value(xi, yj) - h.value(xj, yi)).abs() >= gamma;
    Ok(solve(h, ThresholdMode::Gamma { gamma }, ok, false))
}

/// `h_{y_j}(x_i) <= r` and `h_{y_i}(x_j) >= s` for all `i < j`.
pub fn threshold_dim_rs(h: &HypothesisClass, r: Rat, s: Rat) -> Result<(usize, ThresholdWitness)> {
    if r < Rat::ZERO || s > Rat::ONE || r >= s {
        return Err(Error::BadInterval { r: r.to_string(), s: s.to_string() });
    }
    let ok = |xi: usize, yi: usize, xj: usize, yj: usize| h.value(xi, yj) <= r && h.value(xj, yi) >= s;
    Ok(solve(h, ThresholdMode::Rs { r, s }, ok, true))
}
