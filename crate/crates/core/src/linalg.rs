//! Small dense matrices of floats and intervals.

use crate::interval::Interval;

pub type Matrix = Vec<Vec<f64>>;
pub type IMatrix = Vec<Vec<Interval>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Gauss-Jordan inverse with partial pivoting. `None` when a pivot falls
/// below `1e-13` times the largest entry.
pub fn invert(a: &[Vec<f64>]) -> Option<Matrix> {
    let n = a.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut m: Matrix = a.to_vec();
    let mut inv = identity(n);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() <= 1e-13 * scale {
            return None;
        }
        m.swap(c, p);
        inv.swap(c, p);
        let f = 1.0 / m[c][c];
        for j in 0..n {
            m[c][j] *= f;
            inv[c][j] *= f;
        }
        for i in 0..n {
            if i != c && m[i][c] != 0.0 {
                let g = m[i][c];
                for j in 0..n {
                    m[i][j] -= g * m[c][j];
                    inv[i][j] -= g * inv[c][j];
                }
            }
        }
    }
    Some(inv)
}

pub fn to_intervals(a: &[Vec<f64>]) -> IMatrix {
    a.iter()
        .map(|r| r.iter().map(|&x| Interval::point(x)).collect())
        .collect()
}

pub fn imul(a: &[Vec<Interval>], b: &[Vec<Interval>]) -> IMatrix {
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(Interval::ZERO, |s, l| s + row[l] * b[l][j]))
                .collect()
        })
        .collect()
}

pub fn imul_vec(a: &[Vec<Interval>], x: &[Interval]) -> Vec<Interval> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(Interval::ZERO, |s, (&p, &q)| s + p * q)
        })
        .collect()
}

/// Rigorous upper bound on the infinity norm (maximum absolute row sum).
pub fn inorm_upper(a: &[Vec<Interval>]) -> f64 {
    a.iter()
        .map(|r| {
            r.iter()
                .fold(Interval::ZERO, |s, x| s + Interval::point(x.mag()))
                .hi()
        })
        .fold(0.0, f64::max)
}

pub fn norm_inf(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn mul_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}
