//! Random corpora and brute-force oracles shared by the integration tests.
//!
//! The oracles below deliberately follow the textbook definitions with no
//! pruning or memoization tricks, so that they can be trusted as references
//! for the optimized searchers.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dimlab::loss::LossFunction;
use dimlab::rational::r;
use dimlab::rng::{self, Rng};
use dimlab::{HypothesisClass, Rat};
use rand::RngExt;

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn class_from(values: Vec<Vec<Rat>>) -> HypothesisClass {
    let nx = values.len();
    let ny = values[0].len();
    HypothesisClass::new(labels("x", nx), labels("y", ny), values).unwrap()
}

/// Random class with values on the grid `{0, 1/den, ..., 1}`.
pub fn random_class(rng: &mut Rng, nx: usize, ny: usize, den: i128) -> HypothesisClass {
    let values = (0..nx).map(|_| (0..ny).map(|_| r(rng.random_range(0..=den), den)).collect()).collect();
    class_from(values)
}

/// Corpus of random classes: a third are concept classes, the rest use
/// eighths or quarters.
pub fn corpus(seed: u64, count: usize, max_x: usize, max_y: usize) -> Vec<HypothesisClass> {
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|i| {
            let nx = rng.random_range(1..=max_x);
            let ny = rng.random_range(1..=max_y);
            let den = [1, 8, 4][i % 3];
            random_class(&mut rng, nx, ny, den)
        })
        .collect()
}

fn row_values(h: &HypothesisClass, x: usize) -> Vec<Rat> {
    h.row(x).iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn subsets_upto(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0usize..1 << n).filter(|m| m.count_ones() as usize <= k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn log2_floor(n: usize) -> usize {
    (usize::BITS - 1 - n.max(1).leading_zeros()) as usize
}

fn all_patterns(k: usize, realized: impl Fn(usize) -> bool) -> bool {
    (0..1usize << k).all(realized)
}

pub fn vc_oracle(h: &HypothesisClass) -> usize {
    subsets_upto(h.n_x(), log2_floor(h.n_y()))
        .into_iter()
        .filter(|s| all_patterns(s.len(), |p| (0..h.n_y()).any(|y| s.iter().enumerate().all(|(i, &x)| (h.value(x, y) == Rat::ONE) == (p >> i & 1 == 1)))))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// Set fat-shattering with full margins: above means `>= t + gamma`,
/// below means `<= t - gamma`. Every feasible threshold can be slid down to
/// some `v + gamma` with `v` an attained value.
pub fn fat_oracle(h: &HypothesisClass, gamma: Rat) -> usize {
    let mut best = 0;
    for s in subsets_upto(h.n_x(), log2_floor(h.n_y())) {
        if s.len() <= best {
            continue;
        }
        let cands: Vec<Vec<Rat>> = s.iter().map(|&x| row_values(h, x).into_iter().map(|v| v + gamma).collect()).collect();
        let mut idx = vec![0usize; s.len()];
        'outer: loop {
            let t: Vec<Rat> = idx.iter().enumerate().map(|(i, &j)| cands[i][j]).collect();
            let ok = all_patterns(s.len(), |p| {
                (0..h.n_y()).any(|y| {
                    s.iter().enumerate().all(|(i, &x)| {
                        let v = h.value(x, y);
                        if p >> i & 1 == 1 { v >= t[i] + gamma } else { v <= t[i] - gamma }
                    })
                })
            });
            if ok {
                best = s.len();
                break;
            }
            for i in 0..s.len() {
                idx[i] += 1;
                if idx[i] < cands[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    best
}

/// Depth of the deepest tree sequentially shattered with `gamma/2` margins,
/// by plain recursion over the surviving hypotheses.
pub fn seq_fat_oracle(h: &HypothesisClass, gamma: Rat) -> usize {
    fn rec(h: &HypothesisClass, ys: &[usize], gamma: Rat) -> usize {
        let mut best = 0;
        for x in 0..h.n_x() {
            let vals: BTreeSet<Rat> = ys.iter().map(|&y| h.value(x, y)).collect();
            for &a in &vals {
                for &b in &vals {
                    if b - a < gamma {
                        continue;
                    }
                    let t = a.midpoint(b);
                    let half = gamma / Rat::int(2);
                    let lo: Vec<usize> = ys.iter().copied().filter(|&y| h.value(x, y) <= t - half).collect();
                    let hi: Vec<usize> = ys.iter().copied().filter(|&y| h.value(x, y) >= t + half).collect();
                    best = best.max(1 + rec(h, &lo, gamma).min(rec(h, &hi, gamma)));
                }
            }
        }
        best
    }
    rec(h, &(0..h.n_y()).collect::<Vec<_>>(), gamma)
}

/// Longest sequence of pairs with distinct points and distinct hypotheses
/// such that `ok(i-th pair, j-th pair)` holds for every `i < j`.
fn longest_sequence(h: &HypothesisClass, ok: &dyn Fn((usize, usize), (usize, usize)) -> bool) -> usize {
    fn rec(h: &HypothesisClass, seq: &mut Vec<(usize, usize)>, ok: &dyn Fn((usize, usize), (usize, usize)) -> bool) -> usize {
        let mut best = seq.len();
        for x in 0..h.n_x() {
            for y in 0..h.n_y() {
                if seq.iter().any(|&(a, b)| a == x || b == y) || !seq.iter().all(|&p| ok(p, (x, y))) {
                    continue;
                }
                seq.push((x, y));
                best = best.max(rec(h, seq, ok));
                seq.pop();
            }
        }
        best
    }
    rec(h, &mut vec![], ok)
}

pub fn threshold_gamma_oracle(h: &HypothesisClass, gamma: Rat) -> usize {
    longest_sequence(h, &|(xi, yi), (xj, yj)| (h.value(xi, yj) - h.value(xj, yi)).abs() >= gamma)
}

pub fn threshold_rs_oracle(h: &HypothesisClass, lo: Rat, hi: Rat) -> usize {
    longest_sequence(h, &|(xi, yi), (xj, yj)| h.value(xi, yj) <= lo && h.value(xj, yi) >= hi)
}

/// Graph dimension: 0-bits need equality with the target, 1-bits a deviation
/// strictly above `gamma`.
pub fn graph_oracle(h: &HypothesisClass, gamma: Rat) -> usize {
    let mut best = 0;
    for s in subsets_upto(h.n_x(), log2_floor(h.n_y())) {
        if s.len() <= best {
            continue;
        }
        let cands: Vec<Vec<Rat>> = s.iter().map(|&x| row_values(h, x)).collect();
        let mut idx = vec![0usize; s.len()];
        'outer: loop {
            let f: Vec<Rat> = idx.iter().enumerate().map(|(i, &j)| cands[i][j]).collect();
            let ok = all_patterns(s.len(), |p| {
                (0..h.n_y()).any(|y| {
                    s.iter().enumerate().all(|(i, &x)| {
                        let v = h.value(x, y);
                        if p >> i & 1 == 1 { (v - f[i]).abs() > gamma } else { v == f[i] }
                    })
                })
            });
            if ok {
                best = s.len();
                break;
            }
            for i in 0..s.len() {
                idx[i] += 1;
                if idx[i] < cands[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    best
}

/// Online dimension straight from the recursion over disjoint pairs of
/// nonempty hypothesis sets.
pub fn online_oracle(h: &HypothesisClass, loss: LossFunction) -> Rat {
    fn rec(h: &HypothesisClass, s: u32, loss: LossFunction) -> Rat {
        if s.count_ones() <= 1 {
            return Rat::ZERO;
        }
        let members: Vec<usize> = (0..32).filter(|i| s >> i & 1 == 1).collect();
        let mut best = Rat::ZERO;
        let k = members.len();
        let mut code = vec![0u8; k];
        loop {
            let mut i = 0;
            while i < k && code[i] == 2 {
                code[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            code[i] += 1;
            let a: u32 = members.iter().zip(&code).filter(|(_, &c)| c == 1).fold(0, |m, (&y, _)| m | 1 << y);
            let b: u32 = members.iter().zip(&code).filter(|(_, &c)| c == 2).fold(0, |m, (&y, _)| m | 1 << y);
            if a == 0 || b == 0 || a > b {
                continue;
            }
            let sub = rec(h, a, loss).min(rec(h, b, loss));
            for x in 0..h.n_x() {
                let w = (0..32)
                    .filter(|i| a >> i & 1 == 1)
                    .flat_map(|ya| (0..32).filter(move |i| b >> i & 1 == 1).map(move |yb| (ya, yb)))
                    .map(|(ya, yb)| loss.apply((h.value(x, ya) - h.value(x, yb)).abs()))
                    .min()
                    .unwrap();
                best = best.max(w + sub);
            }
        }
        best
    }
    rec(h, (1u32 << h.n_y()) - 1, loss)
}
