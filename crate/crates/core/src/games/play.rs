//! Simulated runs of built-in learner and adversary policies.

use std::collections::HashMap;

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::games::{hypothesis_losses, RealizableSolver, Round, Transcript};
use crate::loss::LossFunction;
use crate::rational::Rat;
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerPolicy {
    /// predict with the lowest-index hypothesis of least cumulative loss
    FollowTheLeader,
    /// optimal realizable prediction for the current version space; falls
    /// back to follow-the-leader once no hypothesis is consistent
    MinimaxExtract,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AdversaryPolicy {
    /// uniformly random points, labelled by hypothesis `h0`
    Consistent { h0: usize },
    /// optimal realizable point and label choice
    WorstCaseExtract,
    /// fixed `(x, y)` rounds
    Scripted { rounds: Vec<(usize, Rat)> },
}

fn consistent_mask(h: &HypothesisClass, rounds: &[Round]) -> u32 {
    (0..h.n_y())
        .filter(|&y| rounds.iter().all(|r| h.value(r.x, y) == r.y))
        .fold(0u32, |m, y| m | 1 << y)
}

/// Plays `t` rounds. The learner sees `x` and predicts, then the adversary
/// reveals the label. Deterministic given `seed`.
pub fn run_game(
    h: &HypothesisClass,
    loss: LossFunction,
    learner: LearnerPolicy,
    adversary: &AdversaryPolicy,
    t: usize,
    seed: u64,
    pred_grid: Option<&[Rat]>,
) -> Result<Transcript> {
    match adversary {
        AdversaryPolicy::Consistent { h0 } if *h0 >= h.n_y() => {
            return Err(Error::PolicyError(format!("hypothesis {h0} out of range")));
        }
        AdversaryPolicy::Scripted { rounds } => {
            if rounds.len() < t {
                return Err(Error::PolicyError(format!("script has {} rounds, need {t}", rounds.len())));
            }
            if let Some((x, y)) = rounds.iter().find(|(x, y)| *x >= h.n_x() || !y.in_unit_interval()) {
                return Err(Error::PolicyError(format!("invalid scripted round ({x}, {y})")));
            }
        }
        _ => {}
    }
    let needs_solver = learner == LearnerPolicy::MinimaxExtract || *adversary == AdversaryPolicy::WorstCaseExtract;
    let mut solver = if needs_solver { Some(RealizableSolver::new(h, loss, pred_grid)?) } else { None };
    let mut rng = seeded(seed);
    let mut tr = Transcript::default();
    for left in (1..=t).rev() {
        let vs = if needs_solver { consistent_mask(h, &tr.rounds) } else { 0 };
        let x = match adversary {
            AdversaryPolicy::Consistent { .. } => rng.random_range(0..h.n_x()),
            AdversaryPolicy::Scripted { rounds } => rounds[tr.rounds.len()].0,
            AdversaryPolicy::WorstCaseExtract => {
                let s = solver.as_mut().unwrap();
                let mut best = (Rat::ZERO, 0);
                for x in 0..h.n_x() {
                    let v = s.stage(vs, left, x).0;
                    if x == 0 || v > best.0 {
                        best = (v, x);
                    }
                }
                best.1
            }
        };
        let pred = match learner {
            LearnerPolicy::MinimaxExtract if vs != 0 => solver.as_mut().unwrap().stage(vs, left, x).1,
            _ => {
                let losses = hypothesis_losses(&tr, h, loss)?;
                let leader = (0..h.n_y()).min_by_key(|&y| (losses[y], y)).unwrap();
                h.value(x, leader)
            }
        };
        let y = match adversary {
            AdversaryPolicy::Consistent { h0 } => h.value(x, *h0),
            AdversaryPolicy::Scripted { rounds } => rounds[tr.rounds.len()].1,
            AdversaryPolicy::WorstCaseExtract => solver.as_mut().unwrap().response(vs, left, x, pred).1,
        };
        tr.rounds.push(Round { x, y, pred });
    }
    Ok(tr)
}

/// Worst-case cumulative loss of the learner that predicts 0 until a
/// non-zero label appears and afterwards predicts with the lowest-index
/// consistent hypothesis, against realizable adversaries over `t` rounds.
pub fn play_zero_value(h: &HypothesisClass, loss: LossFunction, t: usize) -> Result<Rat> {
    if h.n_y() > 64 {
        return Err(Error::ClassTooLarge(format!("{} hypotheses > 64", h.n_y())));
    }
    let full = if h.n_y() == 64 { u64::MAX } else { (1u64 << h.n_y()) - 1 };
    let mut memo = HashMap::new();
    Ok(play_zero_rec(h, loss, full, false, t, &mut memo))
}

fn play_zero_rec(
    h: &HypothesisClass,
    loss: LossFunction,
    vs: u64,
    seen: bool,
    t: usize,
    memo: &mut HashMap<(u64, bool, usize), Rat>,
) -> Rat {
    if t == 0 {
        return Rat::ZERO;
    }
    if let Some(v) = memo.get(&(vs, seen, t)) {
        return *v;
    }
    let first = vs.trailing_zeros() as usize;
    let mut best = Rat::ZERO;
    for x in 0..h.n_x() {
        let pred = if seen { h.value(x, first) } else { Rat::ZERO };
        let mut labels: Vec<Rat> = (0..h.n_y()).filter(|y| vs >> y & 1 == 1).map(|y| h.value(x, y)).collect();
        labels.sort();
        labels.dedup();
        for y in labels {
            let sub = (0..h.n_y()).filter(|&k| vs >> k & 1 == 1 && h.value(x, k) == y).fold(0u64, |m, k| m | 1 << k);
            let v = loss.apply((pred - y).abs()) + play_zero_rec(h, loss, sub, seen || !y.is_zero(), t - 1, memo);
            if v > best {
                best = v;
            }
        }
    }
    memo.insert((vs, seen, t), best);
    best
}
