//! Monte-Carlo PAC experiments on finite classes.
//!
//! Randomness only enters through sampling: every expectation and supremum
//! inside a trial is computed exactly. Trial `i` draws from the stream
//! seeded with `derive_seed(seed, i)`, so results do not depend on how
//! trials are scheduled across threads. Loss is squared loss throughout.

use rand::distr::weighted::WeightedIndex;
use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::class::{dual_distribution_class, Distribution, HypothesisClass};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::rng::{derive_seed, seeded, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub x: usize,
    pub y: Rat,
}

/// Finitely supported distribution over labelled points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(SamplePoint, Rat)>", into = "Vec<(SamplePoint, Rat)>")]
pub struct SampleDistribution {
    atoms: Vec<(SamplePoint, Rat)>,
}

impl TryFrom<Vec<(SamplePoint, Rat)>> for SampleDistribution {
    type Error = Error;
    fn try_from(atoms: Vec<(SamplePoint, Rat)>) -> Result<Self> {
        SampleDistribution::new(atoms)
    }
}

impl From<SampleDistribution> for Vec<(SamplePoint, Rat)> {
    fn from(d: SampleDistribution) -> Self {
        d.atoms
    }
}

impl SampleDistribution {
    pub fn new(atoms: Vec<(SamplePoint, Rat)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::BadDistribution("no atoms".into()));
        }
        if let Some((p, _)) = atoms.iter().find(|(p, _)| !p.y.in_unit_interval()) {
            return Err(Error::ValueOutOfRange(format!("label {}", p.y)));
        }
        if let Some((_, w)) = atoms.iter().find(|(_, w)| *w <= Rat::ZERO) {
            return Err(Error::BadDistribution(format!("non-positive weight {w}")));
        }
        let total: Rat = atoms.iter().map(|a| a.1).sum();
        if total != Rat::ONE {
            return Err(Error::BadDistribution(format!("weights sum to {total}")));
        }
        Ok(SampleDistribution { atoms })
    }

    pub fn atoms(&self) -> &[(SamplePoint, Rat)] {
        &self.atoms
    }

    fn check(&self, h: &HypothesisClass) -> Result<()> {
        match self.atoms.iter().find(|(p, _)| p.x >= h.n_x()) {
            Some((p, _)) => Err(Error::IndexError(format!("point {} >= {}", p.x, h.n_x()))),
            None => Ok(()),
        }
    }

    fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(self.atoms.iter().map(|a| a.1.to_f64())).expect("weights validated")
    }
}

fn sq(h: &HypothesisClass, idx: usize, p: &SamplePoint) -> Rat {
    let d = h.value(p.x, idx) - p.y;
    d * d
}

pub fn exp_loss(h: &HypothesisClass, idx: usize, p: &SampleDistribution) -> Result<Rat> {
    if idx >= h.n_y() {
        return Err(Error::IndexError(format!("hypothesis {idx} >= {}", h.n_y())));
    }
    p.check(h)?;
    Ok(p.atoms.iter().map(|(z, w)| *w * sq(h, idx, z)).sum())
}

/// Least expected loss and its lowest-index minimizer.
pub fn best_exp_loss(h: &HypothesisClass, p: &SampleDistribution) -> Result<(Rat, usize)> {
    let mut best = (exp_loss(h, 0, p)?, 0);
    for i in 1..h.n_y() {
        let l = exp_loss(h, i, p)?;
        if l < best.0 {
            best = (l, i);
        }
    }
    Ok(best)
}

/// Empirical risk minimizer under squared loss, lowest index on ties.
pub fn erm(h: &HypothesisClass, samples: &[SamplePoint]) -> Result<usize> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(s) = samples.iter().find(|s| s.x >= h.n_x()) {
        return Err(Error::IndexError(format!("point {} >= {}", s.x, h.n_x())));
    }
    // the sample size is common to all hypotheses, so sums compare like means
    let risk = |i: usize| -> Rat { samples.iter().map(|s| sq(h, i, s)).sum() };
    Ok((0..h.n_y()).map(|i| (risk(i), i)).min().unwrap().1)
}

/// How trials are numbered, seeded and spread over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub trials: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl TrialPlan {
    pub fn new(trials: usize, seed: u64) -> Self {
        TrialPlan { trials, seed, jobs: 1 }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::BadRange("trials must be >= 1".into()));
        }
        Ok(())
    }

    /// Runs `f` once per trial on its own stream; output is in trial order.
    pub fn run<T: Send>(&self, f: impl Fn(&mut Rng) -> T + Sync) -> Vec<T> {
        let one = |i: usize| f(&mut seeded(derive_seed(self.seed, i as u64)));
        if self.jobs <= 1 {
            return (0..self.trials).map(one).collect();
        }
        let chunk = self.trials.div_ceil(self.jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..self.trials)
                .step_by(chunk)
                .map(|start| {
                    let one = &one;
                    s.spawn(move || (start..(start + chunk).min(self.trials)).map(one).collect::<Vec<T>>())
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("trial thread panicked")).collect()
        })
    }
}

/// Observed success fraction with a 3-sigma binomial interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub fraction: f64,
    pub hits: usize,
    pub trials: usize,
    pub seed: u64,
    pub sigma: f64,
    pub interval: (f64, f64),
}

impl StatReport {
    fn new(hits: usize, plan: &TrialPlan) -> Self {
        let n = plan.trials as f64;
        let p = hits as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        StatReport {
            fraction: p,
            hits,
            trials: plan.trials,
            seed: plan.seed,
            sigma,
            interval: ((p - 3.0 * sigma).max(0.0), (p + 3.0 * sigma).min(1.0)),
        }
    }
}

fn check_eps(eps: Rat) -> Result<()> {
    if eps <= Rat::ZERO {
        return Err(Error::BadRange(format!("eps = {eps} must be > 0")));
    }
    Ok(())
}

/// Fraction of `m`-samples from `d` on which some hypothesis has empirical
/// mean more than `eps` away from its true mean.
pub fn gc_estimate(h: &HypothesisClass, d: &Distribution, m: usize, eps: Rat, plan: &TrialPlan) -> Result<StatReport> {
    plan.check()?;
    check_eps(eps)?;
    if m == 0 {
        return Err(Error::BadRange("m must be >= 1".into()));
    }
    let means: Vec<Rat> = (0..h.n_y()).map(|y| d.expect(&h.column(y))).collect::<Result<_>>()?;
    let wi = WeightedIndex::new(d.weights().iter().map(|w| w.to_f64())).expect("weights validated");
    let mm = Rat::int(m as i128);
    let bad = plan.run(|rng| {
        let xs: Vec<usize> = (0..m).map(|_| d.support()[rng.sample(&wi)]).collect();
        (0..h.n_y()).any(|y| {
            let emp = xs.iter().map(|&x| h.value(x, y)).sum::<Rat>() / mm;
            (emp - means[y]).abs() > eps
        })
    });
    Ok(StatReport::new(bad.into_iter().filter(|b| *b).count(), plan))
}

/// Fraction of trials in which ERM on `n` samples from `p` lands within
/// `eps` of the best expected loss.
pub fn pac_trial(h: &HypothesisClass, p: &SampleDistribution, n: usize, eps: Rat, plan: &TrialPlan) -> Result<StatReport> {
    plan.check()?;
    check_eps(eps)?;
    if n == 0 {
        return Err(Error::BadRange("n must be >= 1".into()));
    }
    p.check(h)?;
    let (best, _) = best_exp_loss(h, p)?;
    let losses: Vec<Rat> = (0..h.n_y()).map(|i| exp_loss(h, i, p)).collect::<Result<_>>()?;
    let wi = p.sampler();
    let ok = plan.run(|rng| {
        let zs: Vec<SamplePoint> = (0..n).map(|_| p.atoms[rng.sample(&wi)].0).collect();
        let i = erm(h, &zs).expect("non-empty sample");
        losses[i] <= best + eps
    });
    Ok(StatReport::new(ok.into_iter().filter(|b| *b).count(), plan))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectivityReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// expected loss of the best candidate
    pub best_loss: Rat,
    pub mean_excess: f64,
    pub median_excess: f64,
    pub sigma: f64,
}

/// Learns the selectivity `c -> mu(c)` of ranges `c` of a base concept
/// class from `n` supervised pairs. Ranges are drawn uniformly from the
/// parameters of `base`; the hypotheses are the candidate distributions,
/// i.e. the dual distribution class. `hidden` need not be a candidate.
pub fn selectivity_demo(
    base: &HypothesisClass,
    hidden: &Distribution,
    candidates: &[Distribution],
    n: usize,
    plan: &TrialPlan,
) -> Result<SelectivityReport> {
    plan.check()?;
    if n == 0 {
        return Err(Error::BadRange("n must be >= 1".into()));
    }
    if candidates.is_empty() {
        return Err(Error::BadRange("no candidate distributions".into()));
    }
    let dd = dual_distribution_class(base, candidates)?;
    let labels: Vec<Rat> = (0..base.n_y()).map(|c| hidden.expect(&base.column(c))).collect::<Result<_>>()?;
    let w = Rat::new(1, base.n_y() as i128);
    let p = SampleDistribution::new((0..base.n_y()).map(|c| (SamplePoint { x: c, y: labels[c] }, w)).collect())?;
    let losses: Vec<Rat> = (0..dd.n_y()).map(|i| exp_loss(&dd, i, &p)).collect::<Result<_>>()?;
    let best = *losses.iter().min().unwrap();
    let ranges = base.n_y();
    let mut excess: Vec<f64> = plan.run(|rng| {
        let zs: Vec<SamplePoint> = (0..n)
            .map(|_| {
                let c = rng.random_range(0..ranges);
                SamplePoint { x: c, y: labels[c] }
            })
            .collect();
        (losses[erm(&dd, &zs).expect("non-empty sample")] - best).to_f64()
    });
    let k = excess.len() as f64;
    let mean = excess.iter().sum::<f64>() / k;
    let var = excess.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / k;
    excess.sort_by(f64::total_cmp);
    let mid = excess.len() / 2;
    let median = if excess.len() % 2 == 1 { excess[mid] } else { (excess[mid - 1] + excess[mid]) / 2.0 };
    Ok(SelectivityReport { n, trials: plan.trials, seed: plan.seed, best_loss: best, mean_excess: mean, median_excess: median, sigma: (var / k).sqrt() })
}
