//! Finite-horizon online-learning games solved exactly.
//!
//! Each round the adversary picks a point `x`, the learner commits to a
//! prediction (or a mixture over predictions), and then the label `y` is
//! revealed. Online losses are `loss(|prediction - y|)`.

mod agnostic;
mod play;
mod realizable;
pub mod simplex;

pub use agnostic::{agnostic_minimax, AgnosticSolver, DEFAULT_MAX_STATES, MAX_AGNOSTIC_Y};
pub use play::{play_zero_value, run_game, AdversaryPolicy, LearnerPolicy};
pub use realizable::{realizable_value, RealizableSolver, MAX_REALIZABLE_Y};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::loss::LossFunction;
use crate::rational::Rat;

pub fn loss_eval(loss: LossFunction, x: Rat) -> Result<Rat> {
    loss.eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub x: usize,
    pub y: Rat,
    pub pred: Rat,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<Round>,
}

impl Transcript {
    pub fn validate(&self, h: &HypothesisClass) -> Result<()> {
        for (i, r) in self.rounds.iter().enumerate() {
            if r.x >= h.n_x() {
                return Err(Error::IndexError(format!("round {i}: point {} >= {}", r.x, h.n_x())));
            }
            if !r.y.in_unit_interval() || !r.pred.in_unit_interval() {
                return Err(Error::OutOfRange(format!("round {i}: label or prediction outside [0,1]")));
            }
        }
        Ok(())
    }

    /// Learner's cumulative loss.
    pub fn learner_loss(&self, loss: LossFunction) -> Rat {
        self.rounds.iter().map(|r| loss.apply((r.pred - r.y).abs())).sum()
    }
}

/// Cumulative loss of every hypothesis on the transcript.
pub fn hypothesis_losses(t: &Transcript, h: &HypothesisClass, loss: LossFunction) -> Result<Vec<Rat>> {
    t.validate(h)?;
    Ok((0..h.n_y())
        .map(|y| t.rounds.iter().map(|r| loss.apply((h.value(r.x, y) - r.y).abs())).sum())
        .collect())
}

/// Learner loss minus the loss of the best hypothesis in hindsight.
pub fn regret(t: &Transcript, h: &HypothesisClass, loss: LossFunction) -> Result<Rat> {
    let best = hypothesis_losses(t, h, loss)?.into_iter().min().unwrap_or(Rat::ZERO);
    Ok(t.learner_loss(loss) - best)
}

/// Learner mixture at one opening point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstMove {
    pub x: usize,
    /// `(prediction, probability)` with zero-probability entries dropped
    pub mixture: Vec<(Rat, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameValue {
    pub value: Rat,
    pub value_f64: f64,
    /// false only when an exact value did not fit the i128 rationals and
    /// `value` is a rounded approximation
    pub exact: bool,
    pub horizon: usize,
    /// adversary's optimal opening points with the learner's reply
    pub first_moves: Vec<FirstMove>,
}

const APPROX_BITS: u32 = 60;

/// Converts an exact value, rounding to `2^-60` when it overflows i128.
pub(crate) fn big_to_rat(b: &BigRational) -> (Rat, bool) {
    match Rat::from_big(b) {
        Ok(r) => (r, true),
        Err(_) => {
            let f = b.to_f64().unwrap_or(0.0);
            let scale = (1u64 << APPROX_BITS) as f64;
            (Rat::new((f * scale).round() as i128, 1i128 << APPROX_BITS), false)
        }
    }
}

/// Sorted distinct values of the class plus every pairwise midpoint.
pub fn default_pred_grid(h: &HypothesisClass) -> Vec<Rat> {
    let vals = class_values(h);
    let mut g = vals.clone();
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            g.push(a.midpoint(*b));
        }
    }
    g.sort();
    g.dedup();
    g
}

/// Sorted distinct values of the class together with 0 and 1.
pub fn default_label_grid(h: &HypothesisClass) -> Vec<Rat> {
    let mut g = class_values(h);
    g.push(Rat::ZERO);
    g.push(Rat::ONE);
    g.sort();
    g.dedup();
    g
}

pub fn class_values(h: &HypothesisClass) -> Vec<Rat> {
    let mut v: Vec<Rat> = h.values().iter().flatten().copied().collect();
    v.sort();
    v.dedup();
    v
}

pub(crate) fn check_grid(name: &str, g: &[Rat]) -> Result<Vec<Rat>> {
    if g.is_empty() {
        return Err(Error::OutOfRange(format!("{name} is empty")));
    }
    if let Some(v) = g.iter().find(|v| !v.in_unit_interval()) {
        return Err(Error::OutOfRange(format!("{name} entry {v} outside [0,1]")));
    }
    let mut g = g.to_vec();
    g.sort();
    g.dedup();
    Ok(g)
}
