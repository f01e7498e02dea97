//! Agnostic game: arbitrary labels from a grid, randomized learner, regret
//! against the best hypothesis in hindsight.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::games::simplex::solve_min_max;
use crate::games::{big_to_rat, check_grid, default_label_grid, default_pred_grid, FirstMove, GameValue};
use crate::loss::LossFunction;
use crate::rational::Rat;

pub const MAX_AGNOSTIC_Y: usize = 12;
pub const DEFAULT_MAX_STATES: usize = 1_000_000;
const MAX_GRID: usize = 32;

/// Memoized minimax regret over states of cumulative hypothesis losses.
///
/// `V(L, t) = V(L - min L, t) - min L`, so only normalized loss vectors are
/// stored.
pub struct AgnosticSolver<'a> {
    h: &'a HypothesisClass,
    preds: Vec<Rat>,
    labels: Vec<Rat>,
    // distinct rows only; duplicate points give identical stage games
    points: Vec<usize>,
    pred_loss: Vec<Vec<BigRational>>,
    hyp_loss: Vec<Vec<Vec<Rat>>>,
    memo: HashMap<(Vec<Rat>, usize), BigRational>,
    max_states: usize,
}

impl<'a> AgnosticSolver<'a> {
    pub fn new(
        h: &'a HypothesisClass,
        loss: LossFunction,
        pred_grid: Option<&[Rat]>,
        label_grid: Option<&[Rat]>,
        max_states: usize,
    ) -> Result<Self> {
        if h.n_y() > MAX_AGNOSTIC_Y {
            return Err(Error::ClassTooLarge(format!("{} hypotheses > {MAX_AGNOSTIC_Y}", h.n_y())));
        }
        let preds = match pred_grid {
            Some(g) => check_grid("prediction grid", g)?,
            None => default_pred_grid(h),
        };
        let labels = match label_grid {
            Some(g) => check_grid("label grid", g)?,
            None => default_label_grid(h),
        };
        if preds.len() > MAX_GRID || labels.len() > MAX_GRID {
            return Err(Error::TooLarge(format!(
                "stage game {}x{} exceeds {MAX_GRID}x{MAX_GRID}",
                preds.len(),
                labels.len()
            )));
        }
        let mut points: Vec<usize> = vec![];
        for x in 0..h.n_x() {
            if !points.iter().any(|&p| h.row(p) == h.row(x)) {
                points.push(x);
            }
        }
        let pred_loss = preds
            .iter()
            .map(|&p| labels.iter().map(|&y| loss.apply((p - y).abs()).to_big()).collect())
            .collect();
        let hyp_loss = (0..h.n_x())
            .map(|x| labels.iter().map(|&y| h.row(x).iter().map(|&v| loss.apply((v - y).abs())).collect()).collect())
            .collect();
        Ok(AgnosticSolver { h, preds, labels, points, pred_loss, hyp_loss, memo: HashMap::new(), max_states })
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }

    pub fn preds(&self) -> &[Rat] {
        &self.preds
    }

    pub fn labels(&self) -> &[Rat] {
        &self.labels
    }

    /// Minimax regret still to come from cumulative losses `l`.
    pub fn value(&mut self, l: &[Rat], t: usize) -> Result<BigRational> {
        let m = *l.iter().min().unwrap();
        if t == 0 {
            return Ok((-m).to_big());
        }
        let norm: Vec<Rat> = l.iter().map(|&v| v - m).collect();
        if let Some(v) = self.memo.get(&(norm.clone(), t)) {
            return Ok(v - m.to_big());
        }
        let mut best: Option<BigRational> = None;
        for i in 0..self.points.len() {
            let (v, _) = self.stage(&norm, t, self.points[i])?;
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        let best = best.unwrap();
        if self.memo.len() >= self.max_states {
            return Err(Error::StateExplosion(format!("more than {} game states", self.max_states)));
        }
        self.memo.insert((norm, t), best.clone());
        Ok(best - m.to_big())
    }

    /// Stage game at `x`: its value and the learner's optimal mixture.
    pub fn stage(&mut self, l: &[Rat], t: usize, x: usize) -> Result<(BigRational, Vec<BigRational>)> {
        let mut cont = Vec::with_capacity(self.labels.len());
        for j in 0..self.labels.len() {
            let next: Vec<Rat> = l.iter().zip(&self.hyp_loss[x][j]).map(|(a, b)| *a + *b).collect();
            cont.push(self.value(&next, t - 1)?);
        }
        let m: Vec<Vec<BigRational>> = self.pred_loss.iter().map(|row| row.iter().zip(&cont).map(|(a, c)| a + c).collect()).collect();
        Ok(solve_min_max(&m))
    }

    pub fn n_hypotheses(&self) -> usize {
        self.h.n_y()
    }
}

/// Exact minimax expected regret of `t` agnostic rounds.
pub fn agnostic_minimax(
    h: &HypothesisClass,
    loss: LossFunction,
    t: usize,
    pred_grid: Option<&[Rat]>,
    label_grid: Option<&[Rat]>,
    max_states: usize,
) -> Result<GameValue> {
    let mut s = AgnosticSolver::new(h, loss, pred_grid, label_grid, max_states)?;
    let zero = vec![Rat::ZERO; h.n_y()];
    let big = s.value(&zero, t)?;
    let (value, mut exact) = big_to_rat(&big);
    let mut first_moves = vec![];
    if t > 0 {
        for x in 0..h.n_x() {
            let (v, mix) = s.stage(&zero, t, x)?;
            if v != big {
                continue;
            }
            let mut mixture = vec![];
            for (p, q) in s.preds.iter().zip(&mix) {
                if q.numer().sign() != num_bigint::Sign::NoSign {
                    let (q, ok) = big_to_rat(q);
                    exact &= ok;
                    mixture.push((*p, q));
                }
            }
            first_moves.push(FirstMove { x, mixture });
        }
    }
    Ok(GameValue { value, value_f64: big.to_f64().unwrap_or(f64::NAN), exact, horizon: t, first_moves })
}
