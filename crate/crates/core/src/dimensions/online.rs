//! Online dimension for a loss function.
//!
//! `D(S) = max over x and disjoint nonempty A, B of S of
//! [min_{a in A, b in B} loss(|h_a(x) - h_b(x)|) + min(D(A), D(B))]`, with
//! `D(S) = 0` for `|S| <= 1`. Splits with zero weight never beat `D(S)` by
//! monotonicity and are skipped. Hypotheses sharing a value at `x` are
//! always placed together, so `A` and `B` are unions of value groups.

use super::{floor_log2, OnlineDimWitness};
use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::loss::LossFunction;
use crate::rational::Rat;
use crate::trees::{node_count, BinaryTree};

pub const MAX_ONLINE_Y: usize = 16;

#[derive(Clone, Copy)]
struct Choice {
    x: usize,
    weight: Rat,
    a: u32,
    b: u32,
}

struct OnlineDp<'a> {
    h: &'a HypothesisClass,
    loss: LossFunction,
    value: Vec<Option<Rat>>,
    choice: Vec<Option<Choice>>,
}

impl OnlineDp<'_> {
    fn solve(&mut self, s: u32) -> Rat {
        if s.count_ones() <= 1 {
            return Rat::ZERO;
        }
        if let Some(v) = self.value[s as usize] {
            return v;
        }
        let mut best = Rat::ZERO;
        let mut best_choice = None;
        for x in 0..self.h.n_x() {
            let mut groups: Vec<(Rat, u32)> = Vec::new();
            for y in 0..self.h.n_y() {
                if s >> y & 1 == 1 {
                    let v = self.h.value(x, y);
                    match groups.iter_mut().find(|(g, _)| *g == v) {
                        Some((_, m)) => *m |= 1 << y,
                        None => groups.push((v, 1 << y)),
                    }
                }
            }
            if groups.len() < 2 {
                continue;
            }
            groups.sort();
            // side per group (base-3 digit): 0 none, 1 A, 2 B; the first used group is in A
            let m = groups.len();
            let total = 3u64.pow(m as u32);
            for code in 1..total {
                let mut side = vec![0u8; m];
                let mut c = code;
                for d in side.iter_mut() {
                    *d = (c % 3) as u8;
                    c /= 3;
                }
                let first = side.iter().find(|&&c| c != 0);
                if first != Some(&1) || !side.contains(&2) {
                    continue;
                }
                let (mut a, mut b) = (0u32, 0u32);
                let mut gap: Option<Rat> = None;
                let mut last: Option<(u8, Rat)> = None;
                for (g, &c) in groups.iter().zip(&side) {
                    if c == 0 {
                        continue;
                    }
                    if c == 1 {
                        a |= g.1;
                    } else {
                        b |= g.1;
                    }
                    // values ascend, so the nearest cross pair is adjacent
                    if let Some((lc, lv)) = last {
                        if lc != c {
                            let d = g.0 - lv;
                            gap = Some(gap.map_or(d, |x: Rat| x.min(d)));
                        }
                    }
                    last = Some((c, g.0));
                }
                let w = self.loss.apply(gap.unwrap());
                // D(T) <= floor(log2 |T|) because every weight is at most 1
                let cap = floor_log2(a.count_ones().min(b.count_ones()) as usize);
                if w.is_zero() || w + Rat::int(cap as i128) <= best {
                    continue;
                }
                let da = self.solve(a);
                if w + da <= best {
                    continue;
                }
                let v = w + da.min(self.solve(b));
                if v > best {
                    best = v;
                    best_choice = Some(Choice { x, weight: w, a, b });
                }
            }
        }
        self.value[s as usize] = Some(best);
        self.choice[s as usize] = best_choice;
        best
    }

    fn height(&self, s: u32) -> usize {
        match self.choice.get(s as usize).copied().flatten() {
            Some(c) if s.count_ones() > 1 => 1 + self.height(c.a).max(self.height(c.b)),
            _ => 0,
        }
    }

    fn fill(&self, s: u32, depth: usize, node: usize, w: &mut Fill) {
        if depth == 0 {
            w.branches[node - w.internal] = s.trailing_zeros() as usize;
            return;
        }
        let c = if s.count_ones() > 1 { self.choice[s as usize] } else { None };
        match c {
            Some(c) => {
                w.nodes[node] = c.x;
                w.weights[node] = c.weight;
                self.fill(c.a, depth - 1, 2 * node + 1, w);
                self.fill(c.b, depth - 1, 2 * node + 2, w);
            }
            None => {
                // pad: zero weight, one repeated label below
                let keep = 1u32 << s.trailing_zeros();
                self.fill(keep, depth - 1, 2 * node + 1, w);
                self.fill(keep, depth - 1, 2 * node + 2, w);
            }
        }
    }
}

struct Fill {
    internal: usize,
    nodes: Vec<usize>,
    weights: Vec<Rat>,
    branches: Vec<usize>,
}

pub fn online_dim(h: &HypothesisClass, loss: LossFunction) -> Result<(Rat, OnlineDimWitness)> {
    let ny = h.n_y();
    if ny > MAX_ONLINE_Y {
        return Err(Error::ClassTooLarge(format!("{ny} hypotheses, online dimension supports at most {MAX_ONLINE_Y}")));
    }
    let mut dp = OnlineDp { h, loss, value: vec![None; 1 << ny], choice: vec![None; 1 << ny] };
    let full = ((1u64 << ny) - 1) as u32;
    let value = dp.solve(full);
    let depth = dp.height(full);
    let internal = node_count(depth);
    let mut f = Fill {
        internal,
        nodes: vec![0; internal],
        weights: vec![Rat::ZERO; internal],
        branches: vec![0; 1 << depth],
    };
    dp.fill(full, depth, 0, &mut f);
    Ok((
        value,
        OnlineDimWitness {
            value,
            nodes: BinaryTree::new(depth, f.nodes).unwrap(),
            weights: BinaryTree::new(depth, f.weights).unwrap(),
            branches: f.branches,
        },
    ))
}
