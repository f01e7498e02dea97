//! Exact zero-sum matrix games via a rational simplex with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Value and optimal row mixture of `min_q max_j (q^T M)_j`, where the row
/// player minimizes. `m` must be non-empty and rectangular.
pub fn solve_min_max(m: &[Vec<BigRational>]) -> (BigRational, Vec<BigRational>) {
    let rows = m.len();
    let cols = m[0].len();

    // pure saddle point shortcut
    let row_max: Vec<&BigRational> = m.iter().map(|r| r.iter().max().unwrap()).collect();
    let (best_row, upper) = row_max.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).unwrap();
    let lower = (0..cols).map(|j| (0..rows).map(|i| &m[i][j]).min().unwrap()).max().unwrap();
    if *upper == lower {
        let mut q = vec![BigRational::zero(); rows];
        q[best_row] = BigRational::one();
        return ((*upper).clone(), q);
    }

    // shift so every entry is >= 1; then maximize sum(u) s.t. A^T u <= 1
    let min = m.iter().flatten().min().unwrap().clone();
    let shift = BigRational::one() - min;
    let nv = rows + cols;
    // tableau rows: one per column constraint; last entry is the rhs
    let mut tab: Vec<Vec<BigRational>> = (0..cols)
        .map(|j| {
            let mut r = vec![BigRational::zero(); nv + 1];
            for i in 0..rows {
                r[i] = &m[i][j] + &shift;
            }
            r[rows + j] = BigRational::one();
            r[nv] = BigRational::one();
            r
        })
        .collect();
    let mut obj: Vec<BigRational> = (0..=nv).map(|k| if k < rows { BigRational::one() } else { BigRational::zero() }).collect();
    let mut basis: Vec<usize> = (rows..nv).collect();

    while let Some(enter) = (0..nv).find(|&k| obj[k].is_positive()) {
        let mut leave: Option<usize> = None;
        for (r, row) in tab.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[nv] / &row[enter];
            leave = match leave {
                None => Some(r),
                Some(l) => {
                    let cur = &tab[l][nv] / &tab[l][enter];
                    if ratio < cur || (ratio == cur && basis[r] < basis[l]) {
                        Some(r)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // bounded because A > 0
        let l = leave.expect("unbounded stage game");
        let piv = tab[l][enter].clone();
        for v in tab[l].iter_mut() {
            *v = &*v / &piv;
        }
        let prow = tab[l].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r != l && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
        basis[l] = enter;
    }

    let mut u = vec![BigRational::zero(); rows];
    for (r, &b) in basis.iter().enumerate() {
        if b < rows {
            u[b] = tab[r][nv].clone();
        }
    }
    let total: BigRational = u.iter().sum();
    let v = total.recip();
    let q = u.into_iter().map(|x| x * &v).collect();
    (v - shift, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn matching_pennies() {
        let m = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        let (v, mix) = solve_min_max(&m);
        assert_eq!(v, q(1, 2));
        assert_eq!(mix, vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn saddle_point() {
        let m = vec![vec![q(3, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        let (v, mix) = solve_min_max(&m);
        assert_eq!(v, q(2, 1));
        assert_eq!(mix, vec![q(0, 1), q(1, 1)]);
    }

    #[test]
    fn three_predictions() {
        // predictions 0, 1/2, 1 against labels 0, 1 under absolute loss
        let m = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 2), q(1, 2)], vec![q(1, 1), q(0, 1)]];
        let (v, _) = solve_min_max(&m);
        assert_eq!(v, q(1, 2));
    }

    #[test]
    fn rock_paper_scissors() {
        let m = vec![
            vec![q(0, 1), q(1, 1), q(-1, 1)],
            vec![q(-1, 1), q(0, 1), q(1, 1)],
            vec![q(1, 1), q(-1, 1), q(0, 1)],
        ];
        let (v, mix) = solve_min_max(&m);
        assert_eq!(v, q(0, 1));
        assert!(mix.iter().all(|p| *p == q(1, 3)));
    }
}
