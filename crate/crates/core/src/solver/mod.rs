//! Interval branch and bound over the solution set of a constraint system.
//!
//! Two parametrizations of the linear block are available. In angle mode the
//! unknowns are the directions of the free edges and `d`; in x mode they are
//! the x-components of the free edges and `d`, with the y-components recovered
//! up to sign from the length equations.

mod angle;
mod free_point;
mod xmode;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::system::{linear_basis, Affine, BasisMode, ConstraintSystem, Parametrization};

pub use angle::AngleSystem;
pub use free_point::{free_point_search, FreeBox, FreeRegion};
pub use xmode::XSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    X,
    Angle,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Mode::X),
            "angle" => Ok(Mode::Angle),
            _ => Err(Error::InconsistentSpec(format!("unknown mode {s}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::X => "x",
            Mode::Angle => "angle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxStatus {
    /// Proved to contain exactly one solution.
    Verified,
    /// Not excluded at the working tolerance.
    Possible,
    /// Proved to contain no solution.
    Empty,
}

impl std::fmt::Display for BoxStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoxStatus::Verified => "verified",
            BoxStatus::Possible => "possible",
            BoxStatus::Empty => "empty",
        })
    }
}

/// Bounds on `d`; separation `dist(p_i, p_j) >= d` is always enforced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchRegion {
    pub d: Interval,
}

impl SearchRegion {
    pub fn new(d_lo: f64, d_hi: f64) -> Result<Self> {
        if !(0.0 < d_lo && d_lo <= d_hi && d_hi < 1.0) {
            return Err(Error::DistanceOutOfRange(d_hi));
        }
        Ok(Self {
            d: Interval::new(d_lo, d_hi),
        })
    }

    /// From the best known distance (minus `1e-9`) to the density bound.
    pub fn default_for(n: usize) -> Result<Self> {
        let (d, _) = crate::atlas::exact_d(n)?;
        Self::new(
            d - 1e-9,
            crate::torus::upper_bound_d(n).min(crate::system::shift_bound_d()),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveParams {
    pub mode: Mode,
    /// Boxes are refined until every edge component and `d` is narrower.
    pub tol: f64,
    pub budget_nodes: Option<u64>,
    pub budget_time: Option<Duration>,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            mode: Mode::Angle,
            tol: 1e-3,
            budget_nodes: None,
            budget_time: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBox {
    pub mode: Mode,
    /// The branching variables, `d` last.
    pub vars: Vec<Interval>,
    pub d: Interval,
    pub edges: Vec<[Interval; 2]>,
    /// Lifted vertex positions with vertex 0 at the origin.
    pub positions: Vec<[Interval; 2]>,
    pub status: BoxStatus,
}

impl SolutionBox {
    pub fn edge_mid(&self) -> Vec<[f64; 2]> {
        self.edges
            .iter()
            .map(|v| [v[0].mid(), v[1].mid()])
            .collect()
    }

    pub fn position_mid(&self) -> Vec<[f64; 2]> {
        self.positions
            .iter()
            .map(|v| [v[0].mid(), v[1].mid()])
            .collect()
    }

    /// Largest edge-component or `d` width.
    pub fn width(&self) -> f64 {
        self.edges
            .iter()
            .flat_map(|v| v.iter().map(|c| c.width()))
            .fold(self.d.width(), f64::max)
    }

    pub fn contains_edges(&self, vectors: &[[f64; 2]]) -> bool {
        self.edges
            .iter()
            .zip(vectors)
            .all(|(b, v)| b[0].contains(v[0]) && b[1].contains(v[1]))
    }

    fn hull(&self, o: &SolutionBox) -> SolutionBox {
        let h2 = |a: &[[Interval; 2]], b: &[[Interval; 2]]| -> Vec<[Interval; 2]> {
            a.iter()
                .zip(b)
                .map(|(p, q)| [p[0].hull(&q[0]), p[1].hull(&q[1])])
                .collect()
        };
        SolutionBox {
            mode: self.mode,
            vars: self
                .vars
                .iter()
                .zip(&o.vars)
                .map(|(a, b)| a.hull(b))
                .collect(),
            d: self.d.hull(&o.d),
            edges: h2(&self.edges, &o.edges),
            positions: h2(&self.positions, &o.positions),
            status: if self.status == o.status {
                self.status
            } else {
                BoxStatus::Possible
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub boxes: Vec<SolutionBox>,
    /// Hulls of groups of touching boxes.
    pub clusters: Vec<SolutionBox>,
    pub nodes: u64,
    pub budget_exhausted: bool,
}

impl SolveResult {
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }
}

/// Outcome of one feasibility test on a box.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Empty,
    /// Possibly feasible; the box may have been contracted.
    Open(Vec<Interval>),
    /// Contains exactly one solution; the box may have been contracted.
    Verified(Vec<Interval>),
}

impl Node {
    pub fn is_empty(&self) -> bool {
        matches!(self, Node::Empty)
    }
}

/// A parametrized system ready for branch and bound.
pub trait Feasibility: Sync {
    fn mode(&self) -> Mode;
    fn initial_box(&self, region: &SearchRegion) -> Vec<Interval>;
    fn check(&self, x: &[Interval]) -> Node;
    /// Edge vectors and lifted positions enclosed by `x`.
    fn enclose(&self, x: &[Interval]) -> (Vec<[Interval; 2]>, Vec<[Interval; 2]>);
    /// Divisor that puts variable `i` on a common scale for branching.
    fn scale(&self, i: usize) -> f64;
    /// Tighten a verified box until it is narrower than `tol`.
    fn refine(&self, x: Vec<Interval>, _tol: f64) -> Vec<Interval> {
        x
    }
}

/// Sparse linear form `sum c_j t_j + offset` with interval coefficients.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Lin {
    pub terms: Vec<(usize, Interval)>,
    pub offset: [Interval; 2],
}

impl Lin {
    pub fn from_affine(a: &Affine) -> Self {
        let terms = a
            .coeff_intervals()
            .into_iter()
            .enumerate()
            .filter(|(j, _)| !num_traits::Zero::is_zero(&a.coeff[*j]))
            .collect();
        Self {
            terms,
            offset: a.offset_intervals(),
        }
    }

    pub fn diff(a: &Affine, b: &Affine) -> Self {
        let mut d = a.clone();
        for (x, y) in d.coeff.iter_mut().zip(&b.coeff) {
            *x -= y;
        }
        for i in 0..2 {
            d.offset[i] -= &b.offset[i];
        }
        Self::from_affine(&d)
    }
}

/// A vertex pair whose separation is checked, with the shifts realised by
/// edges excluded.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct PairCheck {
    pub diff: Lin,
    pub excluded: Vec<[i64; 2]>,
}

pub(crate) fn pair_checks(s: &ConstraintSystem, p: &Parametrization) -> Vec<PairCheck> {
    let n = s.n();
    let mut out = Vec::new();
    for v in 0..n {
        for w in v + 1..n {
            let mut excluded = Vec::new();
            for (e, &[t, h]) in s.graph.edges().iter().enumerate() {
                let sh = s.edge_shifts[e];
                if (t, h) == (v, w) {
                    excluded.push(sh);
                } else if (t, h) == (w, v) {
                    excluded.push([-sh[0], -sh[1]]);
                }
            }
            out.push(PairCheck {
                diff: Lin::diff(&p.positions[w], &p.positions[v]),
                excluded,
            });
        }
    }
    out
}

/// True when some lattice translate of `delta` is certainly shorter than
/// `d_lo`.
pub(crate) fn too_close(delta: [Interval; 2], excluded: &[[i64; 2]], d_lo: f64) -> bool {
    let r = [
        -delta[0].mid().round() as i64,
        -delta[1].mid().round() as i64,
    ];
    let d2 = d_lo * d_lo;
    for a in -1..=1 {
        for b in -1..=1 {
            let s = [r[0] + a, r[1] + b];
            if excluded.contains(&s) {
                continue;
            }
            let q = (delta[0] + s[0] as f64).sqr() + (delta[1] + s[1] as f64).sqr();
            if q.hi() < d2 {
                return true;
            }
        }
    }
    false
}

/// True when some pair of point boxes is certainly closer than `d.lo()` on
/// the torus. A pair at distance exactly `d.lo()` is kept.
pub fn separation_prune(points: &[[Interval; 2]], d: Interval) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let delta = [points[j][0] - points[i][0], points[j][1] - points[i][1]];
            if too_close(delta, &[], d.lo()) {
                return true;
            }
        }
    }
    false
}

/// Norm argument: a linear row cannot reach a lattice vector longer than the
/// sum of its edge lengths.
pub fn linear_rows_reachable(s: &ConstraintSystem, d_hi: f64) -> bool {
    s.linear_rows().iter().all(|row| {
        let total: i64 = row.terms.iter().map(|t| t.1.abs()).sum();
        let r2 = (row.rhs[0] * row.rhs[0] + row.rhs[1] * row.rhs[1]) as f64;
        r2.sqrt() <= total as f64 * d_hi * (1.0 + 1e-12)
    })
}

pub fn prepare(s: &ConstraintSystem, mode: Mode) -> Result<Box<dyn Feasibility>> {
    Ok(match mode {
        Mode::Angle => Box::new(AngleSystem::new(s, &linear_basis(s, BasisMode::Angle)?)),
        Mode::X => Box::new(XSystem::new(s, &linear_basis(s, BasisMode::X)?)),
    })
}

/// Number of independent subtrees the root box is split into; fixed so that
/// results do not depend on the worker count.
const SUBTREES: usize = 64;

pub fn solve(
    s: &ConstraintSystem,
    region: &SearchRegion,
    params: &SolveParams,
) -> Result<SolveResult> {
    if !linear_rows_reachable(s, region.d.hi()) {
        return Ok(SolveResult {
            boxes: Vec::new(),
            clusters: Vec::new(),
            nodes: 0,
            budget_exhausted: false,
        });
    }
    let sys = prepare(s, params.mode)?;
    Ok(branch_and_bound(sys.as_ref(), region, params))
}

fn widest(sys: &dyn Feasibility, x: &[Interval]) -> usize {
    (0..x.len())
        .max_by(|&i, &j| (x[i].width() / sys.scale(i)).total_cmp(&(x[j].width() / sys.scale(j))))
        .unwrap()
}

fn small_enough(sys: &dyn Feasibility, x: &[Interval], tol: f64) -> bool {
    let d = x[x.len() - 1];
    if d.width() >= tol {
        return false;
    }
    let (edges, _) = sys.enclose(x);
    edges
        .iter()
        .all(|v| v[0].width() < tol && v[1].width() < tol)
}

fn split(x: &[Interval], i: usize) -> (Vec<Interval>, Vec<Interval>) {
    let (a, b) = x[i].bisect();
    let mut l = x.to_vec();
    let mut r = x.to_vec();
    l[i] = a;
    r[i] = b;
    (l, r)
}

struct Subtree {
    found: Vec<(Vec<Interval>, BoxStatus)>,
    nodes: u64,
    exhausted: bool,
}

fn run_subtree(
    sys: &dyn Feasibility,
    root: Vec<Interval>,
    tol: f64,
    budget: Option<u64>,
    deadline: Option<Instant>,
) -> Subtree {
    let mut out = Subtree {
        found: Vec::new(),
        nodes: 0,
        exhausted: false,
    };
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        if budget.is_some_and(|b| out.nodes >= b) || deadline.is_some_and(|t| Instant::now() >= t) {
            out.exhausted = true;
            out.found.push((x, BoxStatus::Possible));
            out.found
                .extend(stack.drain(..).map(|x| (x, BoxStatus::Possible)));
            break;
        }
        out.nodes += 1;
        match sys.check(&x) {
            Node::Empty => {}
            Node::Verified(y) => out.found.push((sys.refine(y, tol), BoxStatus::Verified)),
            Node::Open(y) => {
                if small_enough(sys, &y, tol) {
                    out.found.push((y, BoxStatus::Possible));
                } else {
                    let (l, r) = split(&y, widest(sys, &y));
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }
    out
}

pub fn branch_and_bound(
    sys: &dyn Feasibility,
    region: &SearchRegion,
    params: &SolveParams,
) -> SolveResult {
    let deadline = params.budget_time.map(|t| Instant::now() + t);
    // Breadth-first split of the root into a fixed number of subtrees.
    let mut roots = vec![sys.initial_box(region)];
    while roots.len() < SUBTREES {
        let next: Vec<Vec<Interval>> = roots
            .iter()
            .flat_map(|x| {
                let (l, r) = split(x, widest(sys, x));
                [l, r]
            })
            .collect();
        roots = next;
    }
    let budget = params.budget_nodes.map(|b| (b / SUBTREES as u64).max(1));
    let parts: Vec<Subtree> = roots
        .into_par_iter()
        .map(|r| run_subtree(sys, r, params.tol, budget, deadline))
        .collect();
    let mut nodes = 0;
    let mut exhausted = false;
    let mut found = Vec::new();
    for p in parts {
        nodes += p.nodes;
        exhausted |= p.exhausted;
        found.extend(p.found);
    }
    let mut boxes: Vec<SolutionBox> = found
        .into_iter()
        .map(|(x, status)| {
            let (edges, positions) = sys.enclose(&x);
            SolutionBox {
                mode: sys.mode(),
                d: x[x.len() - 1],
                vars: x,
                edges,
                positions,
                status,
            }
        })
        .collect();
    boxes.sort_by(|a, b| {
        let key = |s: &SolutionBox| s.vars.iter().map(|v| (v.lo(), v.hi())).collect::<Vec<_>>();
        key(a)
            .partial_cmp(&key(b))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let clusters = cluster(&boxes);
    SolveResult {
        boxes,
        clusters,
        nodes,
        budget_exhausted: exhausted,
    }
}

/// Hulls of connected groups of boxes, where boxes are adjacent when their
/// variable intervals all intersect.
pub fn cluster(boxes: &[SolutionBox]) -> Vec<SolutionBox> {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let touch = boxes[i]
                .vars
                .iter()
                .zip(&boxes[j].vars)
                .all(|(a, b)| a.intersects(b));
            if touch {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, SolutionBox)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|(k, _)| *k == r) {
            Some((_, h)) => *h = h.hull(&boxes[i]),
            None => out.push((r, boxes[i].clone())),
        }
    }
    out.into_iter().map(|(_, b)| b).collect()
}

#[cfg(test)]
mod tests;
