//! First-order optimality of a packing: stresses on the contacts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::simplex::feasible_point;
use crate::torus::{Configuration, SHIFTS};

/// Relative tolerance for a pair to count as a contact.
pub const CONTACT_TOL: f64 = 1e-9;

/// Absolute slack allowed in the force balance, absorbing rounding of the
/// coordinates.
const BALANCE_TOL: f64 = 1e-9;

/// `p_j - p_i + shift` has length `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contact {
    pub i: usize,
    pub j: usize,
    pub shift: [i64; 2],
    /// Unit vector from `p_i` to the translate of `p_j`.
    pub unit: [f64; 2],
}

/// All contact pairs at distance `d` within `CONTACT_TOL * d`.
pub fn contacts(c: &Configuration, d: f64) -> Vec<Contact> {
    let p = c.coords();
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let base = [p[j][0] - p[i][0], p[j][1] - p[i][1]];
            let r = [-base[0].round() as i64, -base[1].round() as i64];
            for s in SHIFTS {
                let shift = [r[0] + s[0], r[1] + s[1]];
                let v = [base[0] + shift[0] as f64, base[1] + shift[1] as f64];
                let len = v[0].hypot(v[1]);
                if (len - d).abs() <= CONTACT_TOL * d {
                    out.push(Contact {
                        i,
                        j,
                        shift,
                        unit: [v[0] / len, v[1] / len],
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum KktVerdict {
    /// Nonnegative stresses summing to one balance every vertex.
    Satisfied { stresses: Vec<f64> },
    /// A motion that lengthens every contact; one vector per point.
    Violated { direction: Vec<[f64; 2]> },
}

impl KktVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, KktVerdict::Satisfied { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KktReport {
    pub contacts: Vec<Contact>,
    pub verdict: KktVerdict,
}

/// Dyadic grid for the simplex data. Rounding moves each balance entry by
/// at most `2^-37`, well inside `BALANCE_TOL`, and keeps the exact pivots
/// cheap.
const GRID: f64 = (1u64 << 36) as f64;

fn q(x: f64) -> BigRational {
    let scaled = (x * GRID).round();
    BigRational::new(BigInt::from(scaled as i64), BigInt::from(1u64 << 36))
}

/// Rate of change of each contact length under the motion `m`.
pub fn contact_rates(contacts: &[Contact], m: &[[f64; 2]]) -> Vec<f64> {
    contacts
        .iter()
        .map(|k| k.unit[0] * (m[k.j][0] - m[k.i][0]) + k.unit[1] * (m[k.j][1] - m[k.i][1]))
        .collect()
}

pub fn kkt_check(c: &Configuration, d: f64) -> KktReport {
    let n = c.len();
    let ks = contacts(c, d);
    if ks.is_empty() {
        return KktReport {
            contacts: ks,
            verdict: KktVerdict::Violated {
                direction: separate_closest(c),
            },
        };
    }
    let k = ks.len();
    let rows = 2 * n;
    // Balance matrix: column per contact, +u at j and -u at i.
    let mut bal = vec![vec![0.0f64; k]; rows];
    for (col, ct) in ks.iter().enumerate() {
        for a in 0..2 {
            bal[2 * ct.j + a][col] += ct.unit[a];
            bal[2 * ct.i + a][col] -= ct.unit[a];
        }
    }
    if let Some(stresses) = stresses(&bal, k) {
        return KktReport {
            contacts: ks,
            verdict: KktVerdict::Satisfied { stresses },
        };
    }
    let direction = improving_direction(&bal, n, k).unwrap_or_else(|| separate_closest(c));
    KktReport {
        contacts: ks,
        verdict: KktVerdict::Violated { direction },
    }
}

/// `lambda >= 0`, `sum lambda = 1`, `|B lambda| <= tol` componentwise.
fn stresses(bal: &[Vec<f64>], k: usize) -> Option<Vec<f64>> {
    let rows = bal.len();
    let cols = k + 2 * rows;
    let zero = BigRational::zero();
    let tau = q(BALANCE_TOL);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut sum = vec![zero.clone(); cols];
    for s in sum.iter_mut().take(k) {
        *s = q(1.0);
    }
    a.push(sum);
    b.push(q(1.0));
    for r in 0..rows {
        // B lambda - g_r = -tau and g_r + h_r = 2 tau, so B lambda in [-tau, tau].
        let mut row = vec![zero.clone(); cols];
        for c in 0..k {
            row[c] = q(bal[r][c]);
        }
        row[k + r] = q(-1.0);
        a.push(row);
        b.push(-tau.clone());
        let mut row = vec![zero.clone(); cols];
        row[k + r] = q(1.0);
        row[k + rows + r] = q(1.0);
        a.push(row);
        b.push(&tau + &tau);
    }
    let x = feasible_point(&a, &b)?;
    Some(x[..k].iter().map(|v| v.to_f64().unwrap_or(0.0)).collect())
}

/// `m` with every contact rate at least one.
fn improving_direction(bal: &[Vec<f64>], n: usize, k: usize) -> Option<Vec<[f64; 2]>> {
    let rows = 2 * n;
    let cols = 2 * rows + k;
    let zero = BigRational::zero();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for c in 0..k {
        let mut row = vec![zero.clone(); cols];
        for r in 0..rows {
            row[r] = q(bal[r][c]);
            row[rows + r] = q(-bal[r][c]);
        }
        row[2 * rows + c] = q(-1.0);
        a.push(row);
        b.push(q(1.0));
    }
    let x = feasible_point(&a, &b)?;
    let m: Vec<f64> = (0..rows)
        .map(|r| (&x[r] - &x[rows + r]).to_f64().unwrap_or(0.0))
        .collect();
    let scale = m
        .iter()
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    Some(
        (0..n)
            .map(|v| [m[2 * v] / scale, m[2 * v + 1] / scale])
            .collect(),
    )
}

fn separate_closest(c: &Configuration) -> Vec<[f64; 2]> {
    let n = c.len();
    let mut out = vec![[0.0, 0.0]; n];
    let mut best: Option<(f64, usize, usize, [f64; 2])> = None;
    for i in 0..n {
        for j in i + 1..n {
            let (v, _) = crate::torus::min_image(c.point(i), c.point(j));
            let len = v[0].hypot(v[1]);
            if best.is_none_or(|b| len < b.0) {
                best = Some((len, i, j, v));
            }
        }
    }
    if let Some((len, i, j, v)) = best {
        let u = if len > 0.0 {
            [v[0] / len, v[1] / len]
        } else {
            [1.0, 0.0]
        };
        out[j] = u;
        out[i] = [-u[0], -u[1]];
    }
    out
}
