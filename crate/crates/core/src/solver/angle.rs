//! Angle parametrization: free edge `j` is `d (cos a_j, sin a_j)`.

use super::{pair_checks, too_close, Feasibility, Lin, Mode, Node, PairCheck, SearchRegion};
use crate::interval::{two_pi, Interval};
use crate::linalg::{imul, imul_vec, invert, to_intervals};
use crate::system::{ConstraintSystem, Parametrization};

/// Start of the angle window. Chosen away from multiples of pi/12 so that
/// lattice-aligned edges do not sit on the seam.
pub const ANGLE_ORIGIN: f64 = -std::f64::consts::FRAC_1_PI;

/// Try the Krawczyk test once every normalized width is below this.
const KRAWCZYK_WIDTH: f64 = 0.02;

pub struct AngleSystem {
    k: usize,
    free: Vec<usize>,
    edges: Vec<Lin>,
    dependent: Vec<usize>,
    positions: Vec<Lin>,
    pairs: Vec<PairCheck>,
}

type V2 = [Interval; 2];

fn add2(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

impl AngleSystem {
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

    pub fn dim(&self) -> usize {
        self.k + 1
    }

    fn units(&self, x: &[Interval]) -> Vec<V2> {
        x[..self.k].iter().map(|a| [a.cos(), a.sin()]).collect()
    }

    /// `sum c_j u_j + offset / d` for a linear form.
    fn scaled(l: &Lin, u: &[V2], inv_d: Interval) -> V2 {
        let mut z = [l.offset[0] * inv_d, l.offset[1] * inv_d];
        for &(j, c) in &l.terms {
            z = add2(z, [c * u[j][0], c * u[j][1]]);
        }
        z
    }

    fn unscaled(l: &Lin, u: &[V2], d: Interval) -> V2 {
        let mut w = [Interval::ZERO, Interval::ZERO];
        for &(j, c) in &l.terms {
            w = add2(w, [c * u[j][0], c * u[j][1]]);
        }
        [d * w[0] + l.offset[0], d * w[1] + l.offset[1]]
    }

    /// Direction angles and `d` of known edge vectors, for tests and seeding.
    pub fn point_of(&self, vectors: &[[f64; 2]], d: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .free
            .iter()
            .map(|&e| {
                let a = vectors[e][1].atan2(vectors[e][0]);
                (a - ANGLE_ORIGIN).rem_euclid(std::f64::consts::TAU) + ANGLE_ORIGIN
            })
            .collect();
        out.push(d);
        out
    }

    /// Residuals `|v_e / d|^2 - 1` of the dependent edges.
    fn residual(&self, x: &[Interval]) -> Vec<Interval> {
        let u = self.units(x);
        let inv_d = Interval::ONE / x[self.k];
        self.dependent
            .iter()
            .map(|&e| {
                let z = Self::scaled(&self.edges[e], &u, inv_d);
                z[0].sqr() + z[1].sqr() - 1.0
            })
            .collect()
    }

    fn jacobian(&self, x: &[Interval]) -> Vec<Vec<Interval>> {
        let u = self.units(x);
        let d = x[self.k];
        let inv_d = Interval::ONE / d;
        let inv_d2 = inv_d.sqr();
        self.dependent
            .iter()
            .map(|&e| {
                let l = &self.edges[e];
                let z = Self::scaled(l, &u, inv_d);
                let mut row = vec![Interval::ZERO; self.k + 1];
                for &(j, c) in &l.terms {
                    // d/da_j of u_j is (-sin, cos) = (-u_y, u_x).
                    row[j] = (z[1] * u[j][0] - z[0] * u[j][1]) * c * 2.0;
                }
                row[self.k] = -(z[0] * l.offset[0] + z[1] * l.offset[1]) * inv_d2 * 2.0;
                row
            })
            .collect()
    }

    /// One Krawczyk step. `None` proves the box empty; otherwise the
    /// contracted box and whether it was mapped into its own interior.
    pub fn krawczyk(&self, x: &[Interval]) -> Option<(Vec<Interval>, bool)> {
        let m: Vec<f64> = x.iter().map(|v| v.mid()).collect();
        let mi: Vec<Interval> = m.iter().map(|&v| Interval::point(v)).collect();
        let jm: Vec<Vec<f64>> = self
            .jacobian(&mi)
            .iter()
            .map(|r| r.iter().map(|v| v.mid()).collect())
            .collect();
        let Some(y) = invert(&jm) else {
            return Some((x.to_vec(), false));
        };
        let yi = to_intervals(&y);
        let fm = self.residual(&mi);
        let yf = imul_vec(&yi, &fm);
        let yj = imul(&yi, &self.jacobian(x));
        let dx: Vec<Interval> = x.iter().zip(&m).map(|(v, &c)| *v - c).collect();
        let n = x.len();
        let mut out = Vec::with_capacity(n);
        let mut inside = true;
        for i in 0..n {
            let mut acc = mi[i] - yf[i];
            for j in 0..n {
                let a = if i == j {
                    Interval::ONE - yj[i][j]
                } else {
                    -yj[i][j]
                };
                acc = acc + a * dx[j];
            }
            inside &= acc.lo() > x[i].lo() && acc.hi() < x[i].hi();
            out.push(x[i].intersect(&acc)?);
        }
        Some((out, inside))
    }

    fn normalized_width(&self, x: &[Interval]) -> f64 {
        (0..x.len())
            .map(|i| x[i].width() / self.scale(i))
            .fold(0.0, f64::max)
    }
}

impl Feasibility for AngleSystem {
    fn mode(&self) -> Mode {
        Mode::Angle
    }

    fn initial_box(&self, region: &SearchRegion) -> Vec<Interval> {
        let a = Interval::new(ANGLE_ORIGIN, (two_pi() + ANGLE_ORIGIN).hi());
        let mut x = vec![a; self.k];
        x.push(region.d);
        x
    }

    fn check(&self, x: &[Interval]) -> Node {
        let u = self.units(x);
        let d = x[self.k];
        let inv_d = Interval::ONE / d;
        for &e in &self.dependent {
            let z = Self::scaled(&self.edges[e], &u, inv_d);
            if !(z[0].sqr() + z[1].sqr()).contains(1.0) {
                return Node::Empty;
            }
        }
        for pc in &self.pairs {
            if too_close(Self::unscaled(&pc.diff, &u, d), &pc.excluded, d.lo()) {
                return Node::Empty;
            }
        }
        if self.normalized_width(x) > KRAWCZYK_WIDTH {
            return Node::Open(x.to_vec());
        }
        let mut cur = x.to_vec();
        for _ in 0..4 {
            match self.krawczyk(&cur) {
                None => return Node::Empty,
                Some((y, true)) => return Node::Verified(y),
                Some((y, false)) => {
                    let before = self.normalized_width(&cur);
                    let after = self.normalized_width(&y);
                    cur = y;
                    if after > 0.75 * before {
                        break;
                    }
                }
            }
        }
        // The solution may sit on the boundary of the region; a slightly
        // inflated box can still be proved to hold exactly one solution.
        let wider: Vec<Interval> = cur
            .iter()
            .map(|v| v.inflate(0.1 * v.width() + 1e-12))
            .collect();
        if let Some((k, true)) = self.krawczyk(&wider) {
            if k.iter().zip(&cur).all(|(a, b)| a.intersects(b)) {
                return Node::Verified(k);
            }
        }
        Node::Open(cur)
    }

    fn enclose(&self, x: &[Interval]) -> (Vec<V2>, Vec<V2>) {
        let u = self.units(x);
        let d = x[self.k];
        let edges = self
            .edges
            .iter()
            .map(|l| Self::unscaled(l, &u, d))
            .collect();
        let positions = self
            .positions
            .iter()
            .map(|l| Self::unscaled(l, &u, d))
            .collect();
        (edges, positions)
    }

    fn scale(&self, i: usize) -> f64 {
        if i < self.k {
            std::f64::consts::TAU
        } else {
            0.5
        }
    }

    fn refine(&self, x: Vec<Interval>, tol: f64) -> Vec<Interval> {
        let mut cur = x;
        for _ in 0..60 {
            let (edges, _) = self.enclose(&cur);
            let w = edges
                .iter()
                .flat_map(|v| [v[0].width(), v[1].width()])
                .fold(cur[self.k].width(), f64::max);
            if w < tol * 1e-3 {
                break;
            }
            match self.krawczyk(&cur) {
                Some((y, _)) => {
                    let shrink = self.normalized_width(&y) < 0.9 * self.normalized_width(&cur);
                    cur = y;
                    if !shrink {
                        break;
                    }
                }
                None => break,
            }
        }
        cur
    }
}
