//! Conversions between shattered trees and threshold sequences.

use serde::{Deserialize, Serialize};

use super::{child, monochromatic_subtree, node_count, verify_seq_shatter, verify_spread_shatter, verify_threshold, BinaryTree, SubtreeEmbedding};
use crate::class::HypothesisClass;
use crate::dimensions::{ThresholdMode, ThresholdWitness, TreeShatterWitness};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// A tree whose branches part at each node with labels at least `eps`
/// apart at that node's point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadWitness {
    pub eps: Rat,
    pub nodes: BinaryTree<usize>,
    pub labels: Vec<usize>,
}

impl From<&TreeShatterWitness> for SpreadWitness {
    fn from(w: &TreeShatterWitness) -> Self {
        SpreadWitness { eps: w.gamma, nodes: w.nodes.clone(), labels: w.branches.clone() }
    }
}

fn reverse_inorder(node: usize, depth: usize, out: &mut Vec<usize>) {
    if super::level(node) >= depth {
        return;
    }
    reverse_inorder(child(node, 1), depth, out);
    out.push(node);
    reverse_inorder(child(node, -1), depth, out);
}

/// From an `(r,s)` threshold sequence of length `2^{d+1} - 1`, builds a tree
/// of depth `d` shattered at scale `s - r`.
///
/// The strings of length at most `d` are listed right subtree first, then
/// the node, then the left subtree; the `i`-th string takes the `i`-th pair.
/// Internal strings contribute their point, strings of length `d` their
/// hypothesis. A branch through the right child of `u` is listed before `u`,
/// so its hypothesis is at least `s` at `u`'s point; through the left child
/// it comes after and is at most `r`.
pub fn tree_from_rs_threshold(h: &HypothesisClass, w: &ThresholdWitness) -> Result<TreeShatterWitness> {
    let ThresholdMode::Rs { r, s } = w.mode else {
        return Err(Error::BadWitness("expected an (r,s) threshold witness".into()));
    };
    let len = w.pairs.len();
    if len == 0 || !(len + 1).is_power_of_two() {
        return Err(Error::BadWitness(format!("length {len} is not of the form 2^(d+1) - 1")));
    }
    if !verify_threshold(h, w)? {
        return Err(Error::BadWitness("threshold inequalities fail".into()));
    }
    let d = (len + 1).trailing_zeros() as usize - 1;
    let mut order = Vec::with_capacity(len);
    reverse_inorder(0, d + 1, &mut order);
    let mut pos = vec![0; len];
    for (i, &node) in order.iter().enumerate() {
        pos[node] = i;
    }
    let internal = node_count(d);
    let nodes = (0..internal).map(|u| w.pairs[pos[u]].0).collect();
    let branches = (0..1usize << d).map(|b| w.pairs[pos[internal + b]].1).collect();
    let out = TreeShatterWitness {
        gamma: s - r,
        nodes: BinaryTree::new(d, nodes)?,
        thresholds: BinaryTree::filled(d, r.midpoint(s)),
        branches,
    };
    debug_assert!(verify_seq_shatter(h, &out, s - r).unwrap_or(false));
    Ok(out)
}

/// `(k^{d+1} - 1) / (k - 1)`.
pub fn ramsey_depth(k: usize, d: usize) -> Option<usize> {
    (0..=d).try_fold(0usize, |acc, i| acc.checked_add(k.checked_pow(i as u32)?))
}

struct View<'a> {
    h: &'a HypothesisClass,
    spread: &'a SpreadWitness,
    delta: Rat,
    k: usize,
}

fn label(v: &View, map: &[usize], depth: usize, b: usize) -> usize {
    let e = SubtreeEmbedding { source_depth: depth, target_depth: v.spread.nodes.depth(), map: map.to_vec() };
    v.spread.labels[e.branch_image(b)]
}

fn interval_distance(u: Rat, lo: Rat, hi: Rat) -> Rat {
    if u < lo {
        lo - u
    } else if u > hi {
        u - hi
    } else {
        Rat::ZERO
    }
}

/// `map` embeds a depth-`depth` tree into the spread-shattered tree.
fn extract(v: &View, map: &[usize], depth: usize, dd: usize) -> Result<Vec<(usize, usize)>> {
    if dd == 0 {
        return Ok(vec![]);
    }
    let hyp = label(v, map, depth, 0);
    if dd == 1 {
        return Ok(vec![(*v.spread.nodes.get(map[0]), hyp)]);
    }
    let k = v.k;
    let kr = Rat::int(k as i128);
    let colors = BinaryTree::from_fn(depth, |i| {
        let val = v.h.value(*v.spread.nodes.get(map[i]), hyp);
        ((val * kr).floor() as usize).min(k - 1)
    });
    let sub_depth = ramsey_depth(k, dd - 1).unwrap() + 1;
    let (a, e) = monochromatic_subtree(&colors, &vec![sub_depth; k])?;
    let sub: Vec<usize> = e.map.iter().map(|&i| map[i]).collect();
    let x_root = *v.spread.nodes.get(sub[0]);
    let lo = Rat::new(a as i128, k as i128);
    let hi = Rat::new(a as i128 + 1, k as i128);
    let half = 1usize << (sub_depth - 1);
    let side_ok = |range: std::ops::Range<usize>| {
        range
            .map(|b| v.h.value(x_root, label(v, &sub, sub_depth, b)))
            .all(|u| interval_distance(u, lo, hi) >= v.delta)
    };
    let first_child = if side_ok(0..half) {
        1
    } else if side_ok(half..2 * half) {
        2
    } else {
        return Err(Error::BadWitness("tree is not spread-shattered at the stated scale".into()));
    };
    // the subtree below the chosen child, as an embedding of depth sub_depth - 1
    let child_map: Vec<usize> = (0..node_count(sub_depth - 1))
        .map(|i| {
            let l = super::level(i);
            let p = i + 1 - (1 << l);
            let base = (1usize << (l + 1)) - 1;
            sub[base + (first_child - 1) * (1 << l) + p]
        })
        .collect();
    let mut out = extract(v, &child_map, sub_depth - 1, dd - 1)?;
    out.push((x_root, hyp));
    Ok(out)
}

/// From a tree spread-shattered at scale `eps` of depth at least
/// `(k^{d+1}-1)/(k-1)`, extracts a `delta`-threshold sequence of length `d`.
pub fn gamma_threshold_from_spread(
    h: &HypothesisClass,
    spread: &SpreadWitness,
    delta: Rat,
    k: usize,
    d: usize,
) -> Result<ThresholdWitness> {
    let eps = spread.eps;
    let violated = |m: String| Err(Error::ParameterConstraintViolated(m));
    if delta <= Rat::ZERO || delta + delta >= eps {
        return violated(format!("need 0 < delta < eps/2, got delta={delta}, eps={eps}"));
    }
    if k < 2 || Rat::int(k as i128) * (eps - delta - delta) <= Rat::ONE {
        return violated(format!("need k > 1/(eps - 2 delta), got k={k}"));
    }
    let need = ramsey_depth(k, d).ok_or_else(|| Error::ParameterConstraintViolated("required depth overflows".into()))?;
    if d > 0 && spread.nodes.depth() < need {
        return violated(format!("depth {} below required {need}", spread.nodes.depth()));
    }
    if !verify_spread_shatter(h, &spread.nodes, &spread.labels, eps)? {
        return Err(Error::BadWitness("tree is not spread-shattered".into()));
    }
    let view = View { h, spread, delta, k };
    let depth = spread.nodes.depth();
    let identity: Vec<usize> = (0..node_count(depth)).collect();
    let pairs = extract(&view, &identity, depth, d)?;
    let out = ThresholdWitness { mode: ThresholdMode::Gamma { gamma: delta }, pairs };
    debug_assert!(verify_threshold(h, &out).unwrap_or(false));
    Ok(out)
}

/// [`gamma_threshold_from_spread`] for a sequentially shattered tree, which
/// is spread-shattered at its own scale.
pub fn gamma_threshold_from_tree(
    h: &HypothesisClass,
    w: &TreeShatterWitness,
    gamma: Rat,
    delta: Rat,
    k: usize,
    d: usize,
) -> Result<ThresholdWitness> {
    if !verify_seq_shatter(h, w, gamma)? {
        return Err(Error::BadWitness("tree is not shattered at the stated scale".into()));
    }
    let spread = SpreadWitness { eps: gamma, nodes: w.nodes.clone(), labels: w.branches.clone() };
    gamma_threshold_from_spread(h, &spread, delta, k, d)
}

/// Largest clique of `members` in which every pair has color `c`.
fn mono_clique(color: &[Vec<usize>], c: usize, cand: Vec<usize>, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() + cand.len() <= best.len() {
        return;
    }
    if cand.is_empty() {
        *best = cur.clone();
        return;
    }
    for (pos, &v) in cand.iter().enumerate() {
        if cur.len() + cand.len() - pos <= best.len() {
            return;
        }
        let next: Vec<usize> = cand[pos + 1..].iter().copied().filter(|&u| color[v][u] == c).collect();
        cur.push(v);
        mono_clique(color, c, next, cur, best);
        cur.pop();
    }
}

/// From a `gamma`-threshold sequence, finds the longest `(r, s)` sequence
/// with `s - r = delta` obtained by coloring each pair `i < j` with the
/// grid level `k/n` just above the lower of the two crossing values and
/// with which side is lower, then extracting a monochromatic clique.
pub fn rs_from_gamma(h: &HypothesisClass, w: &ThresholdWitness, delta: Rat) -> Result<ThresholdWitness> {
    let ThresholdMode::Gamma { gamma } = w.mode else {
        return Err(Error::BadWitness("expected a gamma threshold witness".into()));
    };
    if delta <= Rat::ZERO || delta >= gamma {
        return Err(Error::ParameterConstraintViolated(format!("need 0 < delta < gamma, got {delta}")));
    }
    if !verify_threshold(h, w)? {
        return Err(Error::BadWitness("threshold inequalities fail".into()));
    }
    let n = (gamma - delta).recip().ceil();
    let nr = Rat::int(n);
    let m = w.pairs.len();
    if m == 0 {
        return Ok(ThresholdWitness { mode: ThresholdMode::Rs { r: Rat::ZERO, s: delta }, pairs: vec![] });
    }
    let mut color = vec![vec![usize::MAX; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let (ai, hi) = w.pairs[i];
            let (aj, hj) = w.pairs[j];
            let below = h.value(ai, hj);
            let above = h.value(aj, hi);
            let (low, orient) = if below <= above { (below, 0) } else { (above, 1) };
            let level = (low * nr).ceil() as usize;
            let c = 2 * level + orient;
            color[i][j] = c;
            color[j][i] = c;
        }
    }
    let mut best: Vec<usize> = vec![0];
    let mut best_color = 0;
    for c in 0..2 * (n as usize + 1) {
        let mut cur = vec![];
        let mut found = vec![];
        mono_clique(&color, c, (0..m).collect(), &mut cur, &mut found);
        if found.len() > best.len() {
            best = found;
            best_color = c;
        }
    }
    let level = Rat::new((best_color / 2) as i128, n);
    let mut pairs: Vec<(usize, usize)> = best.iter().map(|&i| w.pairs[i]).collect();
    if best_color % 2 == 1 {
        pairs.reverse();
    }
    if best.len() == 1 {
        // a single pair satisfies any interval
        return Ok(ThresholdWitness { mode: ThresholdMode::Rs { r: Rat::ZERO, s: delta }, pairs });
    }
    let out = ThresholdWitness { mode: ThresholdMode::Rs { r: level, s: level + delta }, pairs };
    debug_assert!(verify_threshold(h, &out).unwrap_or(false));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensions::{seq_fat_dim, threshold_dim_gamma, threshold_dim_rs};
    use crate::generators::{powerset_class, threshold_class};
    use crate::rational::r;

    #[test]
    fn depth_zero_tree() {
        let t = threshold_class(2).unwrap();
        let w = ThresholdWitness { mode: ThresholdMode::Rs { r: Rat::ZERO, s: Rat::ONE }, pairs: vec![(0, 0)] };
        let tree = tree_from_rs_threshold(&t, &w).unwrap();
        assert_eq!(tree.depth(), 0);
        assert_eq!(tree.branches, vec![0]);
    }

    #[test]
    fn threshold_class_gives_depth_one() {
        let t = threshold_class(3).unwrap();
        let (_, w) = threshold_dim_rs(&t, Rat::ZERO, Rat::ONE).unwrap();
        let tree = tree_from_rs_threshold(&t, &w).unwrap();
        assert_eq!(tree.depth(), 1);
        assert!(verify_seq_shatter(&t, &tree, Rat::ONE).unwrap());
        assert_eq!(seq_fat_dim(&t, Rat::ONE).unwrap().0, 2);
    }

    #[test]
    fn rejects_bad_lengths() {
        let t = threshold_class(3).unwrap();
        let (_, mut w) = threshold_dim_rs(&t, Rat::ZERO, Rat::ONE).unwrap();
        w.pairs.pop();
        assert!(matches!(tree_from_rs_threshold(&t, &w), Err(Error::BadWitness(_))));
    }

    #[test]
    fn ramsey_depths() {
        assert_eq!(ramsey_depth(5, 1), Some(6));
        assert_eq!(ramsey_depth(3, 2), Some(13));
        assert_eq!(ramsey_depth(3, 0), Some(1));
    }

    #[test]
    fn parameter_checks() {
        let p = powerset_class(3).unwrap();
        let (_, w) = seq_fat_dim(&p, r(1, 2)).unwrap();
        let e = gamma_threshold_from_tree(&p, &w, r(1, 2), r(1, 8), 5, 1);
        assert!(matches!(e, Err(Error::ParameterConstraintViolated(_))));
        let e = gamma_threshold_from_tree(&p, &w, r(1, 2), r(1, 8), 4, 1);
        assert!(matches!(e, Err(Error::ParameterConstraintViolated(_))));
        let e = gamma_threshold_from_tree(&p, &w, r(1, 2), r(1, 4), 9, 1);
        assert!(matches!(e, Err(Error::ParameterConstraintViolated(_))));
    }

    #[test]
    fn powerset_thirteen_yields_two_pairs() {
        let p = powerset_class(13).unwrap();
        let (d, w) = seq_fat_dim(&p, r(1, 2)).unwrap();
        assert_eq!(d, 13);
        let out = gamma_threshold_from_tree(&p, &w, r(1, 2), r(1, 20), 3, 2).unwrap();
        assert_eq!(out.pairs.len(), 2);
        assert!(verify_threshold(&p, &out).unwrap());
    }

    #[test]
    fn rs_from_gamma_on_thresholds() {
        let t = threshold_class(5).unwrap();
        let (_, w) = threshold_dim_gamma(&t, r(1, 2)).unwrap();
        let out = rs_from_gamma(&t, &w, r(1, 4)).unwrap();
        assert!(verify_threshold(&t, &out).unwrap());
        let ThresholdMode::Rs { r: lo, s: hi } = out.mode else { panic!() };
        assert_eq!(hi - lo, r(1, 4));
        assert!(out.pairs.len() >= 2);
    }
}
