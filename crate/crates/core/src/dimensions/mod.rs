//! Exact dimension computations, each returning a checkable witness.
//!
//! Every searcher is deterministic: ties are broken toward the smallest point
//! and hypothesis indices, so repeated runs emit identical witnesses.

mod online;
mod sequential;
mod shatter;
mod threshold;

pub use online::online_dim;
pub use sequential::{littlestone_dim, seq_fat_dim};
pub use shatter::{fat_dim, graph_dim, vc_dim};
pub use threshold::{threshold_dim_gamma, threshold_dim_rs};

use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::trees::BinaryTree;

/// A set fat-shattered at margin `gamma`. `selector[m]` is the hypothesis
/// realizing the pattern whose bit `i` says whether `points[i]` is above
/// its threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetShatterWitness {
    pub gamma: Rat,
    pub points: Vec<usize>,
    pub thresholds: Vec<Rat>,
    pub selector: Vec<usize>,
}

/// A sequentially fat-shattered tree. Along branch `b` the label
/// `branches[b]` is at least `threshold + gamma/2` where the branch turns
/// right and at most `threshold - gamma/2` where it turns left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeShatterWitness {
    pub gamma: Rat,
    pub nodes: BinaryTree<usize>,
    pub thresholds: BinaryTree<Rat>,
    pub branches: Vec<usize>,
}

impl TreeShatterWitness {
    pub fn depth(&self) -> usize {
        self.nodes.depth()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ThresholdMode {
    Gamma { gamma: Rat },
    Rs { r: Rat, s: Rat },
}

/// Sequence of `(x, y)` index pairs forming a half-graph pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdWitness {
    #[serde(flatten)]
    pub mode: ThresholdMode,
    pub pairs: Vec<(usize, usize)>,
}

/// Graph-dimension witness: bit `i` of the selector index set means the
/// selected hypothesis must deviate from `targets[i]` by more than `gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDimWitness {
    pub gamma: Rat,
    pub points: Vec<usize>,
    pub targets: Vec<Rat>,
    pub selector: Vec<usize>,
}

/// Weighted tree certifying that the online dimension exceeds anything
/// below `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnlineDimWitness {
    pub value: Rat,
    pub nodes: BinaryTree<usize>,
    pub weights: BinaryTree<Rat>,
    pub branches: Vec<usize>,
}

pub(crate) fn check_gamma(gamma: Rat) -> Result<()> {
    if gamma <= Rat::ZERO || gamma > Rat::ONE {
        return Err(Error::GammaOutOfRange(gamma.to_string()));
    }
    Ok(())
}

pub(crate) fn check_concept(h: &HypothesisClass) -> Result<()> {
    if !h.is_concept() {
        return Err(Error::NotConceptClass);
    }
    Ok(())
}

pub(crate) fn floor_log2(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        usize::BITS - 1 - n.leading_zeros()
    }
}

/// Distinct values of row `x`, ascending.
pub(crate) fn distinct_values(h: &HypothesisClass, x: usize) -> Vec<Rat> {
    let mut v = h.row(x).to_vec();
    v.sort();
    v.dedup();
    v
}
