//! Exact combinatorics for finite real-valued hypothesis classes.
//!
//! Classes are matrices of exact rationals. On top of them the crate computes
//! the classical combinatorial dimensions with checkable witnesses, converts
//! between tree and threshold witnesses, evaluates width and covering
//! quantities, evaluates sample-complexity and regret formulas, and solves
//! small online-learning games exactly.

pub mod bitset;
pub mod bounds;
pub mod class;
pub mod error;
pub mod dimensions;
pub mod games;
pub mod generators;
pub mod io;
pub mod loss;
pub mod pacsim;
pub mod rational;
pub mod rng;
pub mod trees;
pub mod width;

pub use class::{Distribution, HypothesisClass, MeasurableFamily, MonotoneMap};
pub use error::{Error, Result};
pub use rational::Rat;
