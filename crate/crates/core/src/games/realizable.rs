//! Realizable game: labels must keep some hypothesis consistent.

use std::collections::HashMap;

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::games::{check_grid, default_pred_grid, FirstMove, GameValue};
use crate::loss::LossFunction;
use crate::rational::Rat;

pub const MAX_REALIZABLE_Y: usize = 16;

/// Backward induction over (version space, rounds left) for a deterministic
/// grid-restricted learner. Version spaces are bitmasks over hypotheses.
pub struct RealizableSolver<'a> {
    h: &'a HypothesisClass,
    loss: LossFunction,
    grid: Vec<Rat>,
    // every class value is a legal prediction, so rounds where the version
    // space does not split cost nothing and the horizon can be capped
    grid_covers: bool,
    memo: HashMap<(u32, usize), Rat>,
}

impl<'a> RealizableSolver<'a> {
    pub fn new(h: &'a HypothesisClass, loss: LossFunction, pred_grid: Option<&[Rat]>) -> Result<Self> {
        if h.n_y() > MAX_REALIZABLE_Y {
            return Err(Error::ClassTooLarge(format!("{} hypotheses > {MAX_REALIZABLE_Y}", h.n_y())));
        }
        let grid = match pred_grid {
            Some(g) => check_grid("prediction grid", g)?,
            None => default_pred_grid(h),
        };
        let grid_covers = h.values().iter().flatten().all(|v| grid.binary_search(v).is_ok());
        Ok(RealizableSolver { h, loss, grid, grid_covers, memo: HashMap::new() })
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.h.n_y()) - 1) as u32
    }

    pub fn grid(&self) -> &[Rat] {
        &self.grid
    }

    /// Sub-version-spaces by label at `x`, in increasing label order.
    pub fn split(&self, vs: u32, x: usize) -> Vec<(Rat, u32)> {
        let row = self.h.row(x);
        let mut parts: Vec<(Rat, u32)> = Vec::new();
        for y in (0..self.h.n_y()).filter(|y| vs >> y & 1 == 1) {
            match parts.iter_mut().find(|p| p.0 == row[y]) {
                Some(p) => p.1 |= 1 << y,
                None => parts.push((row[y], 1 << y)),
            }
        }
        parts.sort();
        parts
    }

    /// Worst-case cumulative loss from `vs` with `t` rounds left.
    pub fn value(&mut self, vs: u32, t: usize) -> Rat {
        let t = if self.grid_covers { t.min(vs.count_ones().saturating_sub(1) as usize) } else { t };
        if t == 0 || vs == 0 {
            return Rat::ZERO;
        }
        if let Some(v) = self.memo.get(&(vs, t)) {
            return *v;
        }
        let best = (0..self.h.n_x()).map(|x| self.stage(vs, t, x).0).max().unwrap_or(Rat::ZERO);
        self.memo.insert((vs, t), best);
        best
    }

    /// Loss the adversary forces at `x` against the prediction `p`.
    pub fn response(&mut self, vs: u32, t: usize, x: usize, p: Rat) -> (Rat, Rat) {
        let mut worst: Option<(Rat, Rat)> = None;
        for (y, sub) in self.split(vs, x) {
            let v = self.loss.apply((p - y).abs()) + self.value(sub, t - 1);
            if worst.is_none_or(|w| v > w.0) {
                worst = Some((v, y));
            }
        }
        worst.expect("empty version space")
    }

    /// Stage value at `x` and the learner's optimal (smallest) prediction.
    pub fn stage(&mut self, vs: u32, t: usize, x: usize) -> (Rat, Rat) {
        let mut best: Option<(Rat, Rat)> = None;
        for i in 0..self.grid.len() {
            let p = self.grid[i];
            let (v, _) = self.response(vs, t, x, p);
            if best.is_none_or(|b| v < b.0) {
                best = Some((v, p));
            }
        }
        best.unwrap()
    }
}

/// Exact minimax cumulative loss of `t` realizable rounds.
pub fn realizable_value(h: &HypothesisClass, loss: LossFunction, t: usize, pred_grid: Option<&[Rat]>) -> Result<GameValue> {
    let mut s = RealizableSolver::new(h, loss, pred_grid)?;
    let full = s.full();
    let value = s.value(full, t);
    let mut first_moves = vec![];
    if t > 0 {
        for x in 0..h.n_x() {
            let (v, p) = s.stage(full, t, x);
            if v == value {
                first_moves.push(FirstMove { x, mixture: vec![(p, Rat::ONE)] });
            }
        }
    }
    Ok(GameValue { value, value_f64: value.to_f64(), exact: true, horizon: t, first_moves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensions::littlestone_dim;
    use crate::generators::{powerset_class, threshold_class};
    use crate::rational::r;

    fn zero_one() -> Vec<Rat> {
        vec![Rat::ZERO, Rat::ONE]
    }

    #[test]
    fn single_hypothesis_costs_nothing() {
        let h = HypothesisClass::new(vec!["a".into(), "b".into()], vec!["h".into()], vec![vec![r(1, 3)], vec![r(2, 3)]])
            .unwrap();
        for t in 0..5 {
            assert_eq!(realizable_value(&h, LossFunction::Identity, t, None).unwrap().value, Rat::ZERO);
        }
    }

    #[test]
    fn mistake_bounds() {
        let p = powerset_class(2).unwrap();
        for t in 2..5 {
            assert_eq!(realizable_value(&p, LossFunction::Identity, t, Some(&zero_one())).unwrap().value, Rat::int(2));
        }
        let th = threshold_class(3).unwrap();
        let (ld, _) = littlestone_dim(&th).unwrap();
        assert_eq!(ld, 2);
        for t in 2..5 {
            assert_eq!(realizable_value(&th, LossFunction::Identity, t, Some(&zero_one())).unwrap().value, Rat::int(2));
        }
    }

    #[test]
    fn midpoints_halve_the_cost() {
        let h = HypothesisClass::new(vec!["x".into()], vec!["0".into(), "1".into()], vec![vec![Rat::ZERO, Rat::ONE]])
            .unwrap();
        let v = realizable_value(&h, LossFunction::Identity, 3, None).unwrap();
        assert_eq!(v.value, r(1, 2));
        assert_eq!(v.first_moves, vec![FirstMove { x: 0, mixture: vec![(r(1, 2), Rat::ONE)] }]);
    }

    #[test]
    fn coarse_grid_keeps_paying() {
        // the only value 1/3 is not on the grid, so every round costs 1/3
        let h = HypothesisClass::new(vec!["x".into()], vec!["h".into()], vec![vec![r(1, 3)]]).unwrap();
        let v = realizable_value(&h, LossFunction::Identity, 3, Some(&zero_one())).unwrap();
        assert_eq!(v.value, Rat::ONE);
    }

    #[test]
    fn too_many_hypotheses() {
        let p = powerset_class(5).unwrap();
        assert!(matches!(
            realizable_value(&p, LossFunction::Identity, 1, None),
            Err(Error::ClassTooLarge(_))
        ));
    }
}
