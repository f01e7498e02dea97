//! Pure checks of the defining inequalities of every witness type.

use std::ops::Range;

use super::{branch_dir, branch_node, position, BinaryTree};
use crate::class::HypothesisClass;
use crate::dimensions::{
    GraphDimWitness, OnlineDimWitness, SetShatterWitness, ThresholdMode, ThresholdWitness, TreeShatterWitness,
};
use crate::error::{Error, Result};
use crate::loss::LossFunction;
use crate::rational::Rat;

fn shape(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

fn check_x(h: &HypothesisClass, xs: impl IntoIterator<Item = usize>) -> Result<()> {
    match xs.into_iter().find(|&x| x >= h.n_x()) {
        Some(x) => Err(shape(format!("point index {x} >= {}", h.n_x()))),
        None => Ok(()),
    }
}

fn check_y(h: &HypothesisClass, ys: impl IntoIterator<Item = usize>) -> Result<()> {
    match ys.into_iter().find(|&y| y >= h.n_y()) {
        Some(y) => Err(shape(format!("hypothesis index {y} >= {}", h.n_y()))),
        None => Ok(()),
    }
}

fn check_patterns(n: usize, selector: &[usize], per_point: usize) -> Result<()> {
    if n >= 32 || selector.len() != 1 << n || per_point != n {
        return Err(shape(format!("{n} points need {} selectors and thresholds", 1usize << n.min(31))));
    }
    Ok(())
}

pub fn verify_set_shatter(h: &HypothesisClass, w: &SetShatterWitness, gamma: Rat) -> Result<bool> {
    let n = w.points.len();
    check_patterns(n, &w.selector, w.thresholds.len())?;
    check_x(h, w.points.iter().copied())?;
    check_y(h, w.selector.iter().copied())?;
    Ok(w.selector.iter().enumerate().all(|(m, &y)| {
        (0..n).all(|i| {
            let v = h.value(w.points[i], y);
            let s = w.thresholds[i];
            if m >> i & 1 == 1 {
                v >= s + gamma
            } else {
                v <= s - gamma
            }
        })
    }))
}

pub fn verify_graph_witness(h: &HypothesisClass, w: &GraphDimWitness) -> Result<bool> {
    let n = w.points.len();
    check_patterns(n, &w.selector, w.targets.len())?;
    check_x(h, w.points.iter().copied())?;
    check_y(h, w.selector.iter().copied())?;
    Ok(w.selector.iter().enumerate().all(|(m, &y)| {
        (0..n).all(|i| {
            let v = h.value(w.points[i], y);
            let f = w.targets[i];
            if m >> i & 1 == 1 {
                (v - f).abs() > w.gamma
            } else {
                v == f
            }
        })
    }))
}

fn check_tree<T>(h: &HypothesisClass, nodes: &BinaryTree<usize>, other: &BinaryTree<T>, branches: &[usize]) -> Result<()> {
    let d = nodes.depth();
    if other.depth() != d || branches.len() != 1 << d {
        return Err(shape(format!("depth {d} tree needs matching trees and {} branch labels", 1usize << d)));
    }
    check_x(h, nodes.nodes().iter().copied())?;
    check_y(h, branches.iter().copied())
}

/// Every branch label sits at least `gamma/2` on the branch's side of each
/// node threshold along the branch.
pub fn verify_seq_shatter(h: &HypothesisClass, w: &TreeShatterWitness, gamma: Rat) -> Result<bool> {
    check_tree(h, &w.nodes, &w.thresholds, &w.branches)?;
    let d = w.depth();
    let half = gamma / Rat::int(2);
    Ok((0..1usize << d).all(|b| {
        (0..d).all(|t| {
            let node = branch_node(d, b, t);
            let v = h.value(*w.nodes.get(node), w.branches[b]);
            let s = *w.thresholds.get(node);
            if branch_dir(d, b, t) > 0 {
                v >= s + half
            } else {
                v <= s - half
            }
        })
    }))
}

pub fn verify_threshold(h: &HypothesisClass, w: &ThresholdWitness) -> Result<bool> {
    check_x(h, w.pairs.iter().map(|p| p.0))?;
    check_y(h, w.pairs.iter().map(|p| p.1))?;
    let p = &w.pairs;
    let distinct = (0..p.len()).all(|i| (i + 1..p.len()).all(|j| p[i].0 != p[j].0 && p[i].1 != p[j].1));
    Ok(distinct && (0..p.len()).all(|i| {
        (i + 1..p.len()).all(|j| {
            let (xi, yi) = p[i];
            let (xj, yj) = p[j];
            match w.mode {
                ThresholdMode::Gamma { gamma } => (h.value(xi, yj) - h.value(xj, yi)).abs() >= gamma,
                ThresholdMode::Rs { r, s } => h.value(xi, yj) <= r && h.value(xj, yi) >= s,
            }
        })
    }))
}

/// Branch ranges below the left and right child of `node` in a depth-`d` tree.
fn sides(d: usize, node: usize) -> (Range<usize>, Range<usize>) {
    let (l, p) = position(node);
    let span = 1usize << (d - l - 1);
    let lo = (2 * p) * span;
    (lo..lo + span, lo + span..lo + 2 * span)
}

/// Least distance at `x` between a label on the left and one on the right.
fn min_cross(h: &HypothesisClass, x: usize, branches: &[usize], d: usize, node: usize) -> Rat {
    let (l, r) = sides(d, node);
    let mut lv: Vec<Rat> = branches[l].iter().map(|&y| h.value(x, y)).collect();
    let mut rv: Vec<Rat> = branches[r].iter().map(|&y| h.value(x, y)).collect();
    lv.sort();
    lv.dedup();
    rv.sort();
    rv.dedup();
    let mut best = Rat::ONE;
    for &u in &lv {
        let k = rv.partition_point(|&v| v < u);
        if k < rv.len() {
            best = best.min(rv[k] - u);
        }
        if k > 0 {
            best = best.min(u - rv[k - 1]);
        }
    }
    best
}

/// Checks the crossing-pair condition at every node and that every branch
/// accumulates weight strictly above `d_claim`.
pub fn verify_online_witness(
    h: &HypothesisClass,
    w: &OnlineDimWitness,
    loss: LossFunction,
    d_claim: Rat,
) -> Result<bool> {
    Ok(online_min_sum(h, w, loss)?.is_some_and(|m| m > d_claim))
}

/// Checks the crossing-pair condition and that every branch accumulates at
/// least the witness's own `value`.
pub fn verify_online_value(h: &HypothesisClass, w: &OnlineDimWitness, loss: LossFunction) -> Result<bool> {
    Ok(online_min_sum(h, w, loss)?.is_some_and(|m| m >= w.value))
}

/// Least branch weight, or `None` when a weight or crossing check fails.
fn online_min_sum(h: &HypothesisClass, w: &OnlineDimWitness, loss: LossFunction) -> Result<Option<Rat>> {
    check_tree(h, &w.nodes, &w.weights, &w.branches)?;
    let d = w.nodes.depth();
    if w.weights.nodes().iter().any(|t| !t.in_unit_interval()) {
        return Ok(None);
    }
    let crossing = (0..w.nodes.nodes().len()).all(|t| {
        let tau = *w.weights.get(t);
        tau.is_zero() || loss.apply(min_cross(h, *w.nodes.get(t), &w.branches, d, t)) >= tau
    });
    if !crossing {
        return Ok(None);
    }
    Ok((0..1usize << d).map(|b| (0..d).map(|t| *w.weights.get(branch_node(d, b, t))).sum::<Rat>()).min())
}

/// Any two branches that part at node `t` carry labels at least `eps` apart
/// at the point decorating `t`.
pub fn verify_spread_shatter(h: &HypothesisClass, tree: &BinaryTree<usize>, labels: &[usize], eps: Rat) -> Result<bool> {
    check_tree(h, tree, tree, labels)?;
    let d = tree.depth();
    Ok((0..tree.nodes().len()).all(|t| min_cross(h, *tree.get(t), labels, d, t) >= eps))
}
