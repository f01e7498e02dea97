//! Constructors for the named example and counterexample classes.

use serde::{Deserialize, Serialize};

use crate::class::{two_choice_class, HypothesisClass};
use crate::error::{Error, Result};
use crate::rational::Rat;

const MAX_PARAMS: usize = 10_000;

fn bit(b: bool) -> Rat {
    if b {
        Rat::ONE
    } else {
        Rat::ZERO
    }
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// All subsets of `{1..n}`; hypothesis `y` is the subset with bitmask `y`.
pub fn powerset_class(n: usize) -> Result<HypothesisClass> {
    if n == 0 || n > 20 {
        return Err(Error::TooLarge(format!("powerset size {n} outside 1..=20")));
    }
    let y_labels = (0..1usize << n)
        .map(|m| {
            let items: Vec<String> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    HypothesisClass::from_fn(numbered(n), y_labels, |x, y| bit(y >> x & 1 == 1))
}

/// `c_j = {i : i < j}` for `j = 1..n+1`.
pub fn threshold_class(n: usize) -> Result<HypothesisClass> {
    if n == 0 {
        return Err(Error::OutOfRange("threshold class needs n >= 1".into()));
    }
    let y_labels = (1..=n + 1).map(|j| format!("c{j}")).collect();
    HypothesisClass::from_fn(numbered(n), y_labels, |x, y| bit(x < y))
}

/// All nonempty intervals `[a,b]` of `{1..n}`.
pub fn interval_class(n: usize) -> Result<HypothesisClass> {
    if n == 0 {
        return Err(Error::OutOfRange("interval class needs n >= 1".into()));
    }
    let count = n * (n + 1) / 2;
    if count > MAX_PARAMS {
        return Err(Error::TooLarge(format!("{count} intervals")));
    }
    let ivs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
    let y_labels = ivs.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
    HypothesisClass::from_fn(numbered(n), y_labels, |x, y| {
        let (a, b) = ivs[y];
        bit(a <= x + 1 && x < b)
    })
}

/// Axis-aligned rectangles `[a1,a2] x [b1,b2]` on the `w x h` grid, plus one
/// degenerate rectangle containing no grid point.
pub fn rectangle_class(w: usize, h: usize) -> Result<HypothesisClass> {
    if w == 0 || h == 0 {
        return Err(Error::OutOfRange("grid sides must be >= 1".into()));
    }
    let count = (w * (w + 1) / 2) * (h * (h + 1) / 2) + 1;
    if count > MAX_PARAMS {
        return Err(Error::TooLarge(format!("{count} rectangles")));
    }
    let points: Vec<(usize, usize)> = (1..=w).flat_map(|i| (1..=h).map(move |j| (i, j))).collect();
    let mut rects: Vec<Option<(usize, usize, usize, usize)>> = Vec::with_capacity(count);
    for a1 in 1..=w {
        for a2 in a1..=w {
            for b1 in 1..=h {
                for b2 in b1..=h {
                    rects.push(Some((a1, a2, b1, b2)));
                }
            }
        }
    }
    rects.push(None);
    let x_labels = points.iter().map(|(i, j)| format!("({i},{j})")).collect();
    let y_labels = rects
        .iter()
        .map(|r| match r {
            Some((a1, a2, b1, b2)) => format!("[{a1},{a2}]x[{b1},{b2}]"),
            None => "empty".to_string(),
        })
        .collect();
    HypothesisClass::from_fn(x_labels, y_labels, |x, y| {
        let (i, j) = points[x];
        bit(match rects[y] {
            Some((a1, a2, b1, b2)) => a1 <= i && i <= a2 && b1 <= j && j <= b2,
            None => false,
        })
    })
}

/// Even integers inside `[y1, y2]`, for `1 <= y1 <= y2 <= n`.
pub fn even_interval_class(n: usize) -> Result<HypothesisClass> {
    if n < 2 {
        return Err(Error::OutOfRange("even interval class needs n >= 2".into()));
    }
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
    if pairs.len() > MAX_PARAMS {
        return Err(Error::TooLarge(format!("{} parameters", pairs.len())));
    }
    let y_labels = pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    HypothesisClass::from_fn(numbered(n), y_labels, |x, y| {
        let v = x + 1;
        let (a, b) = pairs[y];
        bit(v % 2 == 0 && a <= v && v <= b)
    })
}

fn poly_eval(coeffs: &[Rat], x: Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::ZERO, |acc, &c| acc * x + c)
}

/// Rational functions `P/Q` with coefficients (lowest degree first) drawn
/// from `coeff_grid`, kept only when `Q` has no zero on `x_grid` and the
/// quotient lies in `[0,1]` on every grid point.
pub fn rational_fn_class(
    coeff_grid: &[Rat],
    x_grid: &[Rat],
    deg_p: usize,
    deg_q: usize,
) -> Result<HypothesisClass> {
    if deg_p > 5 || deg_q > 5 {
        return Err(Error::OutOfRange(format!("degrees ({deg_p},{deg_q}) exceed 5")));
    }
    if coeff_grid.is_empty() || x_grid.is_empty() {
        return Err(Error::EmptyClass);
    }
    let arity = deg_p + deg_q + 2;
    let total = (coeff_grid.len() as f64).powi(arity as i32);
    if total > MAX_PARAMS as f64 {
        return Err(Error::TooLarge(format!("{total} coefficient tuples")));
    }
    let total = total as usize;
    let mut labels = Vec::new();
    let mut columns: Vec<Vec<Rat>> = Vec::new();
    let mut digits = vec![0usize; arity];
    for _ in 0..total {
        let coeffs: Vec<Rat> = digits.iter().map(|&d| coeff_grid[d]).collect();
        let (p, q) = coeffs.split_at(deg_p + 1);
        let mut col = Vec::with_capacity(x_grid.len());
        for &x in x_grid {
            let qv = poly_eval(q, x);
            if qv.is_zero() {
                break;
            }
            let v = poly_eval(p, x) / qv;
            if !v.in_unit_interval() {
                break;
            }
            col.push(v);
        }
        if col.len() == x_grid.len() {
            let fmt = |c: &[Rat]| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            labels.push(format!("P[{}]/Q[{}]", fmt(p), fmt(q)));
            columns.push(col);
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < coeff_grid.len() {
                break;
            }
            *d = 0;
        }
    }
    if columns.is_empty() {
        return Err(Error::EmptyClass);
    }
    let x_labels = x_grid.iter().map(|x| x.to_string()).collect();
    HypothesisClass::from_fn(x_labels, labels, |x, y| columns[y][x])
}

/// One representative point per piece: `h_b(x_i) = 3/4 b_i + 1/8 sum_j b_j 2^-j`.
pub fn h0_class(k: usize) -> Result<HypothesisClass> {
    if k == 0 || k > 20 {
        return Err(Error::TooLarge(format!("k = {k} outside 1..=20")));
    }
    let x_labels = (0..k).map(|i| format!("x{i}")).collect();
    let y_labels = (0..1usize << k)
        .map(|m| (0..k).map(|i| if m >> i & 1 == 1 { '1' } else { '0' }).collect::<String>())
        .collect();
    let den = 1i128 << (k + 2);
    HypothesisClass::from_fn(x_labels, y_labels, |x, y| {
        // 1/8 * 2^-j = 2^(k-1-j) / 2^(k+2)
        let tail: i128 = (0..k).filter(|j| y >> j & 1 == 1).map(|j| 1i128 << (k - 1 - j)).sum();
        let head = if y >> x & 1 == 1 { 3 * (den / 4) } else { 0 };
        Rat::new(head + tail, den)
    })
}

/// Two-choice mixtures over [`h0_class`]: for each pattern `beta` the
/// hypothesis `lambda h_beta + (1 - lambda) h_ones` with `lambda` chosen so
/// that the mixture equals 1/2 exactly at every `x_i` with `beta_i = 0`.
pub fn h0_two_choice_class(k: usize) -> Result<HypothesisClass> {
    let h = h0_class(k)?;
    let ones = (1usize << k) - 1;
    // h_b(x) = 3/4 b_x + c_b, so c_b is the value at any point outside b
    let c = |b: usize| -> Rat {
        let x = (0..k).find(|x| b >> x & 1 == 0);
        match x {
            Some(x) => h.value(x, b),
            None => h.value(0, b) - Rat::new(3, 4),
        }
    };
    let c1 = c(ones);
    let top = Rat::new(1, 4) + c1;
    let lambdas: Vec<Rat> = (0..1usize << k).map(|b| top / (Rat::new(3, 4) + c1 - c(b))).collect();
    let pairs: Vec<(usize, usize)> = (0..1usize << k).map(|b| (b, ones)).collect();
    two_choice_class(&h, &lambdas, &pairs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSequence {
    gammas: Vec<Rat>,
}

impl GammaSequence {
    pub fn new(gammas: Vec<Rat>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::OutOfRange("empty scale sequence".into()));
        }
        if gammas[0] > Rat::ONE {
            return Err(Error::GammaOutOfRange(gammas[0].to_string()));
        }
        if *gammas.last().unwrap() <= Rat::ZERO {
            return Err(Error::GammaOutOfRange(gammas.last().unwrap().to_string()));
        }
        if gammas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::OutOfRange("scales must be strictly decreasing".into()));
        }
        Ok(GammaSequence { gammas })
    }

    pub fn gammas(&self) -> &[Rat] {
        &self.gammas
    }
}

pub fn tree_string(len: usize, bits: usize) -> String {
    let s: String = (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect();
    format!("t{s}")
}

/// Truncation of the tree class: points are strings of length `< d`,
/// parameters strings of length `d`; `h_b(x) = b_|x| * gamma_|x|` when `x` is a
/// prefix of `b`, else 0. Strings are labelled `t` followed by their bits;
/// points come in level order.
pub fn tree_class(gammas: &GammaSequence, d: usize) -> Result<HypothesisClass> {
    if d > 12 {
        return Err(Error::TooLarge(format!("depth {d} > 12")));
    }
    if d == 0 {
        return Err(Error::OutOfRange("depth must be >= 1".into()));
    }
    if d > gammas.gammas.len() {
        return Err(Error::OutOfRange(format!(
            "depth {d} needs {d} scales, have {}",
            gammas.gammas.len()
        )));
    }
    // point index 2^l - 1 + p  <->  string of length l with bits p
    let points: Vec<(usize, usize)> = (0..d).flat_map(|l| (0..1usize << l).map(move |p| (l, p))).collect();
    let x_labels = points.iter().map(|&(l, p)| tree_string(l, p)).collect();
    let y_labels = (0..1usize << d).map(|b| tree_string(d, b)).collect();
    HypothesisClass::from_fn(x_labels, y_labels, |x, b| {
        let (l, p) = points[x];
        if b >> (d - l) != p {
            return Rat::ZERO;
        }
        if b >> (d - l - 1) & 1 == 1 {
            gammas.gammas[l]
        } else {
            Rat::ZERO
        }
    })
}
