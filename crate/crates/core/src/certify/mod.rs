//! Local uniqueness certificates, atlas matching and first-order optimality.

mod kkt;
mod simplex;

use std::fmt;

use crate::atlas::{known_entry, variant_count, Status};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{identity, imul, inorm_upper, invert, to_intervals};
use crate::solver::SolutionBox;
use crate::system::CoordinateSystem;
use crate::torus::{
    density, min_pairwise_distance, wrap_diff, Configuration, PointGroupElement, TorusPoint,
};

pub use kkt::{contact_rates, contacts, kkt_check, Contact, KktReport, KktVerdict, CONTACT_TOL};
pub use simplex::feasible_point;

/// Rigorous upper bound on `||B^-1||_inf` from an approximate inverse `C`:
/// `||C|| / (1 - ||I - C B||)`.
pub fn inverse_norm_bound(b: &[Vec<f64>]) -> Result<f64> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!(
            "{n} rows, expected a square matrix"
        )));
    }
    let c = invert(b).ok_or(Error::NumericallySingular(f64::INFINITY))?;
    let ci = to_intervals(&c);
    let cb = imul(&ci, &to_intervals(b));
    let id = identity(n);
    let resid: Vec<Vec<Interval>> = cb
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, &v)| Interval::point(id[i][j]) - v)
                .collect()
        })
        .collect();
    let eta = inorm_upper(&resid);
    if eta >= 1.0 {
        return Err(Error::NumericallySingular(eta));
    }
    let bound = Interval::point(inorm_upper(&ci)) / (Interval::ONE - Interval::point(eta));
    Ok(bound.hi())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    UniqueInBox,
    Inconclusive,
    Singular,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::UniqueInBox => "unique-in-box",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Singular => "singular",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    /// Largest deviation of an edge coordinate in the box from the matrix
    /// entry it perturbs.
    pub delta: f64,
    /// Infinity-norm diameter of the box in the coordinate unknowns.
    pub epsilon: f64,
    /// Upper bound on `||B^-1||` at the box midpoint, if `B` is regular.
    pub inv_norm_bound: Option<f64>,
    /// Lower bound on `inf ||dF(v)||` over unit `v` and the whole box.
    pub h: f64,
    pub radius: f64,
    pub verdict: Verdict,
}

/// Reduced coordinates of the box midpoint, shifted onto the reference of
/// `cs`, and the per-vertex integer offsets used.
fn aligned_positions(b: &SolutionBox, cs: &CoordinateSystem) -> Vec<[Interval; 2]> {
    b.positions
        .iter()
        .zip(&cs.reference)
        .map(|(p, r)| {
            let f = [(p[0].mid() - r[0]).round(), (p[1].mid() - r[1]).round()];
            [p[0] - f[0], p[1] - f[1]]
        })
        .collect()
}

pub fn uniqueness_certificate(b: &SolutionBox, cs: &CoordinateSystem) -> CertificateReport {
    let pos = aligned_positions(b, cs);
    let mid: Vec<[f64; 2]> = pos.iter().map(|p| [p[0].mid(), p[1].mid()]).collect();
    // Vertex 0 is pinned; shift so its midpoint is the origin.
    let o = mid[0];
    let mid: Vec<[f64; 2]> = mid.iter().map(|p| [p[0] - o[0], p[1] - o[1]]).collect();
    let bm = cs.reduced_jacobian(&mid);
    let mut delta = 0.0f64;
    for (e, v) in b.edges.iter().enumerate() {
        let entry = cs.edge_vector(e, &mid);
        for a in 0..2 {
            let dev = (Interval::point(v[a].hi()) - entry[a])
                .hi()
                .max((Interval::point(entry[a]) - v[a].lo()).hi());
            delta = delta.max(dev);
        }
    }
    let d2 = b.d.sqr() * 0.5;
    let epsilon = pos
        .iter()
        .flat_map(|p| [p[0].width(), p[1].width()])
        .fold(d2.width(), f64::max);
    let beta = match inverse_norm_bound(&bm) {
        Ok(beta) => beta,
        Err(_) => {
            return CertificateReport {
                delta,
                epsilon,
                inv_norm_bound: None,
                h: 0.0,
                radius: 0.0,
                verdict: Verdict::Singular,
            }
        }
    };
    // Edge rows of dF differ from B in four entries, each by at most delta.
    let beta_i = Interval::point(beta);
    let four_delta_beta = beta_i * (4.0 * delta);
    if four_delta_beta.hi() >= 1.0 {
        // Some differential in the box may be singular.
        return CertificateReport {
            delta,
            epsilon,
            inv_norm_bound: Some(beta),
            h: 0.0,
            radius: 0.0,
            verdict: Verdict::Singular,
        };
    }
    let worst = beta_i + four_delta_beta * beta_i / (Interval::ONE - four_delta_beta);
    let h = (Interval::ONE / worst).lo();
    let radius = h / 4.0;
    let verdict = if h > 0.0 && delta.max(epsilon) < radius {
        Verdict::UniqueInBox
    } else {
        Verdict::Inconclusive
    };
    CertificateReport {
        delta,
        epsilon,
        inv_norm_bound: Some(beta),
        h,
        radius,
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtlasMatch {
    pub n: usize,
    pub variant: usize,
    /// Infinity-norm torus distance over matched vertices.
    pub distance: f64,
    pub linear: PointGroupElement,
    /// `assignment[i]` is the atlas vertex matched to vertex `i`.
    pub assignment: Vec<usize>,
}

fn inf_dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    wrap_diff(a[0], b[0]).abs().max(wrap_diff(a[1], b[1]).abs())
}

/// Nearest atlas configuration for `n` points under torus isometries and
/// relabelings, if one is within `tol`. Free disks of the atlas are matched
/// without a distance constraint.
pub fn match_positions(points: &[[f64; 2]], n: usize, tol: f64) -> Option<AtlasMatch> {
    let mut best: Option<AtlasMatch> = None;
    for variant in 1..=variant_count(n) {
        let Ok(entry) = known_entry(n, variant) else {
            continue;
        };
        if entry.config.len() != points.len() {
            continue;
        }
        let target = entry.config.coords();
        for g in PointGroupElement::all() {
            let img: Vec<[f64; 2]> = points.iter().map(|&p| g.apply(p)).collect();
            for anchor in 0..points.len().min(2) {
                for k in 0..target.len() {
                    if entry.free_vertex == Some(k) {
                        continue;
                    }
                    let t = [target[k][0] - img[anchor][0], target[k][1] - img[anchor][1]];
                    let moved: Vec<[f64; 2]> =
                        img.iter().map(|p| [p[0] + t[0], p[1] + t[1]]).collect();
                    if let Some((dist, assignment)) = assign(&moved, &target, entry.free_vertex) {
                        if best.as_ref().is_none_or(|b| dist < b.distance) {
                            best = Some(AtlasMatch {
                                n,
                                variant,
                                distance: dist,
                                linear: g,
                                assignment,
                            });
                        }
                    }
                }
            }
        }
    }
    best.filter(|m| m.distance <= tol)
}

/// Greedy nearest assignment; the free target vertex takes whatever is left.
fn assign(
    points: &[[f64; 2]],
    target: &[[f64; 2]],
    free: Option<usize>,
) -> Option<(f64, Vec<usize>)> {
    let mut used = vec![false; target.len()];
    let mut out = vec![usize::MAX; points.len()];
    let mut worst = 0.0f64;
    let mut order: Vec<usize> = (0..points.len()).collect();
    // Points closest to some non-free target are assigned first.
    let near = |i: usize| {
        (0..target.len())
            .filter(|&k| Some(k) != free)
            .map(|k| inf_dist(points[i], target[k]))
            .fold(f64::INFINITY, f64::min)
    };
    order.sort_by(|&a, &b| near(a).total_cmp(&near(b)));
    for &i in &order {
        let k = (0..target.len())
            .filter(|&k| !used[k] && Some(k) != free)
            .min_by(|&a, &b| {
                inf_dist(points[i], target[a]).total_cmp(&inf_dist(points[i], target[b]))
            });
        match k {
            Some(k) if free.is_none() || inf_dist(points[i], target[k]) < 0.05 => {
                worst = worst.max(inf_dist(points[i], target[k]));
                used[k] = true;
                out[i] = k;
            }
            _ => {
                let f = free.filter(|&f| !used[f])?;
                used[f] = true;
                out[i] = f;
            }
        }
    }
    Some((worst, out))
}

pub fn match_to_atlas(b: &SolutionBox, n: usize, tol: f64) -> Option<AtlasMatch> {
    match_positions(&b.position_mid(), n, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub n: usize,
    pub min_distance: f64,
    pub expected: f64,
    pub deviation: f64,
    pub contacts: Vec<Contact>,
    pub kkt: KktVerdict,
    pub density: f64,
    /// Whether the configuration is a proven optimum in the atlas.
    pub status: Option<Status>,
    pub pass: bool,
}

pub fn verify_configuration(
    n: usize,
    coords: &[[f64; 2]],
    expected_d: f64,
) -> Result<VerifyReport> {
    if coords.len() != n {
        return Err(Error::Dimension(format!(
            "{} points given, expected {n}",
            coords.len()
        )));
    }
    let c = Configuration::new(coords.iter().map(|p| TorusPoint::new(p[0], p[1])).collect());
    let min = min_pairwise_distance(&c)?;
    let deviation = (min - expected_d).abs();
    let k = kkt_check(&c, min);
    let status = match_positions(coords, n, 1e-7)
        .and_then(|m| known_entry(n, m.variant).ok())
        .map(|e| e.status);
    let pass = deviation < 1e-7 && k.verdict.is_satisfied();
    Ok(VerifyReport {
        n,
        min_distance: min,
        expected: expected_d,
        deviation,
        contacts: k.contacts,
        kkt: k.verdict,
        density: density(n, min)?,
        status,
        pass,
    })
}
