//! Widths, mean widths and covering numbers of finite point clouds.

use rand::RngExt;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::rng;
use crate::trees::BinaryTree;

pub const EXHAUSTIVE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCloud {
    n: usize,
    points: Vec<Vec<Rat>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<Rat>>) -> Result<Self> {
        let n = points.first().ok_or_else(|| Error::DimensionMismatch("empty point cloud".into()))?.len();
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::DimensionMismatch("points of differing dimension".into()));
        }
        Ok(PointCloud { n, points })
    }

    /// `H(x_1..x_n, Y)`: one point per hypothesis.
    pub fn from_class(h: &HypothesisClass, xs: &[usize]) -> Result<Self> {
        if let Some(&x) = xs.iter().find(|&&x| x >= h.n_x()) {
            return Err(Error::IndexError(format!("point index {x} >= {}", h.n_x())));
        }
        if xs.is_empty() {
            return Err(Error::DimensionMismatch("empty point tuple".into()));
        }
        PointCloud::new((0..h.n_y()).map(|y| xs.iter().map(|&x| h.value(x, y)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    pub fn scale(&self, c: Rat) -> PointCloud {
        PointCloud { n: self.n, points: self.points.iter().map(|p| p.iter().map(|&v| v * c).collect()).collect() }
    }
}

/// `max_{a in A} a . b`.
pub fn width(a: &PointCloud, b: &[Rat]) -> Result<Rat> {
    if b.len() != a.n {
        return Err(Error::DimensionMismatch(format!("direction of length {} for dimension {}", b.len(), a.n)));
    }
    Ok(a.points.iter().map(|p| p.iter().zip(b).map(|(&x, &y)| x * y).sum::<Rat>()).max().unwrap())
}

fn sign_width(a: &PointCloud, signs: usize) -> Rat {
    a.points
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &v)| if signs >> i & 1 == 1 { v } else { -v }).sum::<Rat>())
        .max()
        .unwrap()
}

/// Exact average of the width over all `2^n` sign vectors.
pub fn rademacher_mean_width(a: &PointCloud) -> Result<Rat> {
    if a.n > 20 {
        return Err(Error::TooLarge(format!("dimension {} > 20", a.n)));
    }
    let total: Rat = (0..1usize << a.n).map(|s| sign_width(a, s)).sum();
    Ok(total / Rat::int(1 << a.n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

/// Multisets of size `n` drawn from `0..m`, as nondecreasing tuples.
fn multisets(m: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut cur = vec![0usize; n];
    loop {
        f(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] + 1 < m {
                let v = cur[i] + 1;
                for c in &mut cur[i..] {
                    *c = v;
                }
                break;
            }
        }
    }
}

/// `R_H(n) = sup_{xs in X^n} rademacher_mean_width(H(xs, Y))`.
///
/// The mean width is invariant under permuting coordinates, so exhaustive
/// mode enumerates multisets. Sampled mode evaluates uniformly drawn tuples
/// exactly and reports the best, a certified lower bound.
pub fn class_rademacher(h: &HypothesisClass, n: usize, mode: Mode) -> Result<(Rat, Vec<usize>)> {
    if n == 0 {
        return Ok((Rat::ZERO, vec![]));
    }
    if n > 20 {
        return Err(Error::TooLarge(format!("n = {n} > 20")));
    }
    let mut best: Option<(Rat, Vec<usize>)> = None;
    let mut consider = |xs: &[usize]| {
        let v = rademacher_mean_width(&PointCloud::from_class(h, xs).unwrap()).unwrap();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, xs.to_vec()));
        }
    };
    match mode {
        Mode::Exhaustive => {
            if (h.n_x() as u128).checked_pow(n as u32).is_none_or(|c| c > EXHAUSTIVE_CAP) {
                return Err(Error::TooLarge(format!("|X|^n exceeds {EXHAUSTIVE_CAP}")));
            }
            multisets(h.n_x(), n, consider);
        }
        Mode::Sampled { trials, seed } => {
            let mut r = rng::seeded(seed);
            for _ in 0..trials.max(1) {
                let xs: Vec<usize> = (0..n).map(|_| r.random_range(0..h.n_x())).collect();
                consider(&xs);
            }
        }
    }
    Ok(best.unwrap())
}

/// Value of the tree game from the given per-hypothesis offsets with
/// `depth` levels to go: the sup over the remaining subtree of the mean over
/// signs of `max_h offset_h + sum_t s_t h(x_t)`.
fn seq_value(h: &HypothesisClass, offsets: &[Rat], depth: usize) -> (Rat, Option<usize>) {
    if depth == 0 {
        return (*offsets.iter().max().unwrap(), None);
    }
    let half = Rat::new(1, 2);
    let mut best: Option<(Rat, usize)> = None;
    for x in 0..h.n_x() {
        let plus: Vec<Rat> = offsets.iter().enumerate().map(|(y, &o)| o + h.value(x, y)).collect();
        let minus: Vec<Rat> = offsets.iter().enumerate().map(|(y, &o)| o - h.value(x, y)).collect();
        let v = half * (seq_value(h, &plus, depth - 1).0 + seq_value(h, &minus, depth - 1).0);
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, x));
        }
    }
    let (v, x) = best.unwrap();
    (v, Some(x))
}

fn seq_tree(h: &HypothesisClass, offsets: &[Rat], depth: usize, node: usize, out: &mut [usize]) {
    if depth == 0 {
        return;
    }
    let x = seq_value(h, offsets, depth).1.unwrap();
    out[node] = x;
    let plus: Vec<Rat> = offsets.iter().enumerate().map(|(y, &o)| o + h.value(x, y)).collect();
    let minus: Vec<Rat> = offsets.iter().enumerate().map(|(y, &o)| o - h.value(x, y)).collect();
    seq_tree(h, &minus, depth - 1, 2 * node + 1, out);
    seq_tree(h, &plus, depth - 1, 2 * node + 2, out);
}

/// Mean over signs of the width of the path vectors of a fixed `X`-valued
/// tree. Along sign vector `s`, coordinate `t` reads the node reached by
/// `s_1..s_{t-1}` and carries sign `s_t`.
pub fn seq_tree_width(h: &HypothesisClass, tree: &BinaryTree<usize>) -> Rat {
    let d = tree.depth();
    let total: Rat = (0..1usize << d)
        .map(|b| {
            (0..h.n_y())
                .map(|y| {
                    (0..d)
                        .map(|t| {
                            let v = h.value(*tree.get(crate::trees::branch_node(d, b, t)), y);
                            if crate::trees::branch_dir(d, b, t) > 0 {
                                v
                            } else {
                                -v
                            }
                        })
                        .sum::<Rat>()
                })
                .max()
                .unwrap()
        })
        .sum();
    total / Rat::int(1 << d)
}

/// Sequential Rademacher mean width of depth `n`, with a tree achieving it.
///
/// Exhaustive mode solves the sup over trees by backward induction: the
/// subtrees after `s_1 = +1` and `s_1 = -1` can be chosen independently.
pub fn seq_class_rademacher(h: &HypothesisClass, n: usize, mode: Mode) -> Result<(Rat, BinaryTree<usize>)> {
    match mode {
        Mode::Exhaustive => {
            if (2 * h.n_x() as u128).checked_pow(n as u32).is_none_or(|c| c > 10 * EXHAUSTIVE_CAP) {
                return Err(Error::TooLarge(format!("(2|X|)^n exceeds {}", 10 * EXHAUSTIVE_CAP)));
            }
            let zero = vec![Rat::ZERO; h.n_y()];
            let (v, _) = seq_value(h, &zero, n);
            let mut nodes = vec![0; crate::trees::node_count(n)];
            seq_tree(h, &zero, n, 0, &mut nodes);
            Ok((v, BinaryTree::new(n, nodes)?))
        }
        Mode::Sampled { trials, seed } => {
            if n > 20 {
                return Err(Error::TooLarge(format!("depth {n} > 20")));
            }
            let mut r = rng::seeded(seed);
            let mut best: Option<(Rat, BinaryTree<usize>)> = None;
            for _ in 0..trials.max(1) {
                let t = BinaryTree::from_fn(n, |_| r.random_range(0..h.n_x()));
                let v = seq_tree_width(h, &t);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, t));
                }
            }
            Ok(best.unwrap())
        }
    }
}

/// Monte-Carlo estimate of `E_g width(A, g)` for standard normal `g`,
/// with its standard error.
pub fn gaussian_mean_width(a: &PointCloud, trials: usize, seed: u64) -> (f64, f64) {
    let trials = trials.max(1);
    let pts: Vec<Vec<f64>> = a.points.iter().map(|p| p.iter().map(Rat::to_f64).collect()).collect();
    let mut r = rng::seeded(seed);
    let mut g = vec![0.0; a.n];
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..trials {
        for v in g.iter_mut() {
            *v = r.sample(StandardNormal);
        }
        let w = pts
            .iter()
            .map(|p| p.iter().zip(&g).map(|(x, y)| x * y).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        sum += w;
        sq += w * w;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = if trials > 1 { ((sq - t * mean * mean) / (t - 1.0)).max(0.0) } else { 0.0 };
    (mean, (var / t).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L2,
    LInf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub size: usize,
    /// false when the greedy upper bound was used
    pub exact: bool,
    pub centers: Vec<usize>,
}

pub const EXACT_COVER_MAX: usize = 20;

/// Fewest closed balls centered at points of `A` covering `A`. The ball
/// test is `max_i |a_i - c_i| <= radius` for `LInf` and
/// `sum_i (a_i - c_i)^2 <= radius_sq` for `L2`.
fn cover_with(a: &PointCloud, within: impl Fn(&[Rat], &[Rat]) -> bool) -> Cover {
    let m = a.points.len();
    let balls: Vec<Vec<bool>> = (0..m).map(|c| (0..m).map(|p| within(&a.points[c], &a.points[p])).collect()).collect();
    if m > EXACT_COVER_MAX {
        let mut covered = vec![false; m];
        let mut centers = vec![];
        while covered.iter().any(|c| !c) {
            let c = (0..m)
                .max_by_key(|&c| (balls[c].iter().zip(&covered).filter(|(b, cv)| **b && !**cv).count(), std::cmp::Reverse(c)))
                .unwrap();
            for p in 0..m {
                covered[p] |= balls[c][p];
            }
            centers.push(c);
        }
        return Cover { size: centers.len(), exact: false, centers };
    }
    let masks: Vec<u32> = balls.iter().map(|b| b.iter().enumerate().fold(0, |acc, (i, &x)| acc | (x as u32) << i)).collect();
    let full = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut best: Vec<usize> = (0..m).collect();
    fn search(masks: &[u32], full: u32, covered: u32, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if covered == full {
            if cur.len() < best.len() {
                *best = cur.clone();
            }
            return;
        }
        if cur.len() + 1 >= best.len() {
            return;
        }
        let p = (!covered & full).trailing_zeros();
        let mut opts: Vec<usize> = (0..masks.len()).filter(|&c| masks[c] >> p & 1 == 1).collect();
        opts.sort_by_key(|&c| std::cmp::Reverse((masks[c] & !covered).count_ones()));
        for c in opts {
            cur.push(c);
            search(masks, full, covered | masks[c], cur, best);
            cur.pop();
        }
    }
    search(&masks, full, 0, &mut vec![], &mut best);
    best.sort();
    Cover { size: best.len(), exact: true, centers: best }
}

pub fn covering_number(a: &PointCloud, gamma: Rat, norm: Norm) -> Cover {
    match norm {
        Norm::LInf => cover_with(a, |c, p| c.iter().zip(p).all(|(&x, &y)| (x - y).abs() <= gamma)),
        Norm::L2 => covering_number_l2_sq(a, gamma * gamma),
    }
}

/// `L2` cover with the radius given by its square, so that radii such as
/// `gamma * sqrt(n)` stay exact.
pub fn covering_number_l2_sq(a: &PointCloud, radius_sq: Rat) -> Cover {
    cover_with(a, |c, p| c.iter().zip(p).map(|(&x, &y)| (x - y) * (x - y)).sum::<Rat>() <= radius_sq)
}
