//! Exact phase-one simplex over the rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A point `x >= 0` with `a x = b`, or `None` when none exists.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    // Tableau columns: n originals, m artificials, right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = if flip {
                -a[i][j].clone()
            } else {
                a[i][j].clone()
            };
        }
        row[n + i] = BigRational::from_integer(1.into());
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let (r, _) = leave?;
        let p = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &p;
        }
        let pivot = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (x, y) in cost.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        basis[r] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn finds_a_point_of_a_simplex() {
        let a = vec![vec![q(1), q(1), q(1)], vec![q(1), q(-1), q(0)]];
        let b = vec![q(1), q(0)];
        let x = feasible_point(&a, &b).unwrap();
        assert_eq!(&x[0] + &x[1] + &x[2], q(1));
        assert_eq!(x[0], x[1]);
        assert!(x.iter().all(|v| !v.is_negative()));
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = -1 with x, y >= 0.
        assert!(feasible_point(&[vec![q(1), q(1)]], &[q(-1)]).is_none());
        // x - y = 1 and y - x = 1.
        assert!(feasible_point(&[vec![q(1), q(-1)], vec![q(-1), q(1)]], &[q(1), q(1)]).is_none());
    }
}
