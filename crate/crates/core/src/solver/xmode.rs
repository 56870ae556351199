//! x-component parametrization: the free x-components and `d` are branched
//! on; y-components are known up to sign from `|v|^2 = d^2` and the signs are
//! searched depth first against the linear y-system.

use super::{pair_checks, too_close, Feasibility, Lin, Mode, Node, PairCheck, SearchRegion};
use crate::interval::Interval;
use crate::system::{ConstraintSystem, Parametrization};

pub struct XSystem {
    k: usize,
    free: Vec<usize>,
    edges: Vec<Lin>,
    dependent: Vec<usize>,
    positions: Vec<Lin>,
    pairs: Vec<PairCheck>,
}

/// Linear form in one component.
fn eval(l: &Lin, t: &[Interval], comp: usize) -> Interval {
    l.terms
        .iter()
        .fold(l.offset[comp], |s, &(j, c)| s + c * t[j])
}

/// `[-hi, -lo] u [lo, hi]` intersects `y`.
fn meets_signed(y: Interval, mag: Interval) -> bool {
    y.intersects(&mag) || y.intersects(&-mag)
}

impl XSystem {
    pub fn new(s: &ConstraintSystem, p: &Parametrization) -> Self {
        let edges: Vec<Lin> = p.edges.iter().map(Lin::from_affine).collect();
        let dependent = (0..edges.len()).filter(|e| !p.free.contains(e)).collect();
        Self {
            k: p.free.len(),
            free: p.free.clone(),
            edges,
            dependent,
            positions: p.positions.iter().map(Lin::from_affine).collect(),
            pairs: pair_checks(s, p),
        }
    }

    pub fn free_edges(&self) -> &[usize] {
        &self.free
    }

    /// x-components of every edge, contracted against `|v_x| <= d`. `None`
    /// when some edge cannot reach the allowed range.
    fn x_components(&self, x: &mut [Interval]) -> Option<Vec<Interval>> {
        let d = x[self.k];
        let box_x = Interval::new(-d.hi(), d.hi());
        for j in 0..self.k {
            x[j] = x[j].intersect(&box_x)?;
        }
        for _ in 0..2 {
            for &e in &self.dependent {
                let l = &self.edges[e];
                let total = eval(l, x, 0).intersect(&box_x)?;
                // Back-propagate onto each term.
                for (i, &(j, c)) in l.terms.iter().enumerate() {
                    let rest = l
                        .terms
                        .iter()
                        .enumerate()
                        .filter(|&(m, _)| m != i)
                        .fold(l.offset[0], |s, (_, &(jj, cc))| s + cc * x[jj]);
                    let cand = (total - rest) / c;
                    x[j] = x[j].intersect(&cand)?;
                }
            }
        }
        Some(self.edges.iter().map(|l| eval(l, x, 0)).collect())
    }

    /// Magnitudes `sqrt(d^2 - v_x^2)` of the y-components.
    fn y_magnitudes(&self, vx: &[Interval], d: Interval) -> Option<Vec<Interval>> {
        vx.iter()
            .map(|v| {
                let q = d.sqr() - v.sqr();
                if q.hi() < 0.0 {
                    None
                } else {
                    Interval::new(q.lo().max(0.0), q.hi()).sqrt()
                }
            })
            .collect()
    }

    /// Depth-first search over the signs of the free y-components. Returns
    /// the hull of the y-values of every consistent pattern (or just the
    /// first one when `all` is false).
    fn sign_search(
        &self,
        vx: &[Interval],
        mag: &[Interval],
        d: Interval,
        all: bool,
    ) -> Option<Vec<Interval>> {
        let loose: Vec<Interval> = self
            .free
            .iter()
            .map(|&e| Interval::new(-mag[e].hi(), mag[e].hi()))
            .collect();
        let mut hull: Option<Vec<Interval>> = None;
        let mut cur = loose.clone();
        self.dfs(0, &mut cur, &loose, vx, mag, d, all, &mut hull);
        hull
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        j: usize,
        cur: &mut Vec<Interval>,
        loose: &[Interval],
        vx: &[Interval],
        mag: &[Interval],
        d: Interval,
        all: bool,
        hull: &mut Option<Vec<Interval>>,
    ) -> bool {
        for &e in &self.dependent {
            if !meets_signed(eval(&self.edges[e], cur, 1), mag[e]) {
                return false;
            }
        }
        if j == self.k {
            let ys: Vec<Interval> = self.edges.iter().map(|l| eval(l, cur, 1)).collect();
            for pc in &self.pairs {
                let dx = eval(&pc.diff, &free_x(vx, &self.free), 0);
                let dy = eval(&pc.diff, cur, 1);
                if too_close([dx, dy], &pc.excluded, d.lo()) {
                    return false;
                }
            }
            *hull = Some(match hull.take() {
                None => ys,
                Some(h) => h.iter().zip(&ys).map(|(a, b)| a.hull(b)).collect(),
            });
            return !all;
        }
        let m = mag[self.free[j]];
        let options: Vec<Interval> = if m.lo() > 0.0 {
            vec![m, -m]
        } else {
            vec![loose[j]]
        };
        for o in options {
            cur[j] = o;
            if self.dfs(j + 1, cur, loose, vx, mag, d, all, hull) {
                cur[j] = loose[j];
                return true;
            }
        }
        cur[j] = loose[j];
        false
    }
}

fn free_x(vx: &[Interval], free: &[usize]) -> Vec<Interval> {
    free.iter().map(|&e| vx[e]).collect()
}

impl Feasibility for XSystem {
    fn mode(&self) -> Mode {
        Mode::X
    }

    fn initial_box(&self, region: &SearchRegion) -> Vec<Interval> {
        let h = region.d.hi();
        let mut x = vec![Interval::new(-h, h); self.k];
        x.push(region.d);
        x
    }

    fn check(&self, x: &[Interval]) -> Node {
        let mut y = x.to_vec();
        let Some(vx) = self.x_components(&mut y) else {
            return Node::Empty;
        };
        let d = y[self.k];
        let Some(mag) = self.y_magnitudes(&vx, d) else {
            return Node::Empty;
        };
        match self.sign_search(&vx, &mag, d, false) {
            None => Node::Empty,
            Some(_) => Node::Open(y),
        }
    }

    fn enclose(&self, x: &[Interval]) -> (Vec<[Interval; 2]>, Vec<[Interval; 2]>) {
        let mut y = x.to_vec();
        let d = x[self.k];
        let vx = self
            .x_components(&mut y)
            .unwrap_or_else(|| self.edges.iter().map(|l| eval(l, x, 0)).collect());
        let ys = self
            .y_magnitudes(&vx, d)
            .and_then(|mag| self.sign_search(&vx, &mag, d, true))
            .unwrap_or_else(|| vec![Interval::new(-d.hi(), d.hi()); self.edges.len()]);
        let fx = free_x(&vx, &self.free);
        let fy: Vec<Interval> = self.free.iter().map(|&e| ys[e]).collect();
        let edges = vx.iter().zip(&ys).map(|(&a, &b)| [a, b]).collect();
        let positions = self
            .positions
            .iter()
            .map(|l| [eval(l, &fx, 0), eval(l, &fy, 1)])
            .collect();
        (edges, positions)
    }

    fn scale(&self, i: usize) -> f64 {
        let _ = i;
        0.5
    }
}
