//! Metric and isometries of the square flat torus `R^2 / Z^2`.
//!
//! Points are stored reduced into `[0, 1)^2`. Distances are taken as the
//! minimum over the nine lattice translates `(dx, dy) in {-1, 0, 1}^2`, which
//! is exact for any pair of reduced points.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};

/// Reduce a real number into `[0, 1)`. `1.0` (and anything that rounds to it)
/// maps to `0.0`.
pub fn reduce(v: f64) -> f64 {
    if (0.0..1.0).contains(&v) {
        return v;
    }
    // `rem_euclid` is exact for finite floats; only the final comparison can
    // land on 1.0 for tiny negative inputs.
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Signed difference `a - b` folded into `[-1/2, 1/2]`.
pub fn wrap_diff(a: f64, b: f64) -> f64 {
    let d = a - b;
    d - d.round()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: reduce(x),
            y: reduce(y),
        }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.17}, {:.17})", self.x, self.y)
    }
}

/// The nine lattice shifts used for minimum-image computations.
pub const SHIFTS: [[i64; 2]; 9] = [
    [-1, -1],
    [-1, 0],
    [-1, 1],
    [0, -1],
    [0, 0],
    [0, 1],
    [1, -1],
    [1, 0],
    [1, 1],
];

/// Torus distance between two points: the minimum Euclidean length of
/// `p - q + s` over the nine shifts `s`.
pub fn torus_dist(p: TorusPoint, q: TorusPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    SHIFTS
        .iter()
        .map(|s| (dx + s[0] as f64).hypot(dy + s[1] as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Minimum-image vector from `p` to `q` together with the lattice shift that
/// realizes it: `q - p + shift`.
pub fn min_image(p: TorusPoint, q: TorusPoint) -> ([f64; 2], [i64; 2]) {
    let mut best = ([0.0, 0.0], [0, 0]);
    let mut best_len = f64::INFINITY;
    for s in SHIFTS {
        let v = [q.x - p.x + s[0] as f64, q.y - p.y + s[1] as f64];
        let len = v[0].hypot(v[1]);
        if len < best_len {
            best_len = len;
            best = (v, s);
        }
    }
    best
}

/// A labeled finite point set on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    points: Vec<TorusPoint>,
}

impl Configuration {
    pub fn new(points: Vec<TorusPoint>) -> Self {
        Self { points }
    }

    pub fn from_coords(coords: &[[f64; 2]]) -> Self {
        Self {
            points: coords.iter().map(|c| TorusPoint::new(c[0], c[1])).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> TorusPoint {
        self.points[i]
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| p.coords()).collect()
    }

    /// Translate so that point `i` sits at the origin.
    pub fn pinned_at(&self, i: usize) -> Self {
        let o = self.points[i];
        Self {
            points: self
                .points
                .iter()
                .map(|p| TorusPoint::new(p.x - o.x, p.y - o.y))
                .collect(),
        }
    }

    pub fn without(&self, i: usize) -> Self {
        let mut points = self.points.clone();
        points.remove(i);
        Self { points }
    }

    pub fn with_point(&self, p: TorusPoint) -> Self {
        let mut points = self.points.clone();
        points.push(p);
        Self { points }
    }
}

pub fn min_pairwise_distance(c: &Configuration) -> Result<f64> {
    if c.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let mut best = f64::INFINITY;
    for i in 0..c.len() {
        for j in 0..i {
            best = best.min(torus_dist(c.points[i], c.points[j]));
        }
    }
    Ok(best)
}

/// Packing density `N * pi * (d/2)^2` of `n` disks of diameter `d`.
pub fn density(n: usize, d: f64) -> Result<f64> {
    if !(0.0..=FRAC_1_SQRT_2 * (1.0 + 1e-12)).contains(&d) {
        return Err(Error::DistanceOutOfRange(d));
    }
    Ok(n as f64 * PI * (d / 2.0).powi(2))
}

/// Upper bound `2 / sqrt(N sqrt(12))` on the optimal distance, from the
/// density of the hexagonal plane packing.
pub fn upper_bound_d(n: usize) -> f64 {
    2.0 / (n as f64 * 12f64.sqrt()).sqrt()
}

/// An element of the point group of the square lattice: a signed
/// permutation matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointGroupElement {
    m: [[i8; 2]; 2],
}

impl PointGroupElement {
    pub const IDENTITY: Self = Self {
        m: [[1, 0], [0, 1]],
    };

    /// All eight elements, identity first.
    pub fn all() -> [Self; 8] {
        [
            Self {
                m: [[1, 0], [0, 1]],
            },
            Self {
                m: [[0, -1], [1, 0]],
            },
            Self {
                m: [[-1, 0], [0, -1]],
            },
            Self {
                m: [[0, 1], [-1, 0]],
            },
            Self {
                m: [[1, 0], [0, -1]],
            },
            Self {
                m: [[-1, 0], [0, 1]],
            },
            Self {
                m: [[0, 1], [1, 0]],
            },
            Self {
                m: [[0, -1], [-1, 0]],
            },
        ]
    }

    /// Rotation by `k * pi/2` counterclockwise.
    pub fn rotation(k: u8) -> Self {
        Self::all()[(k % 4) as usize]
    }

    pub fn reflect_x_axis() -> Self {
        Self {
            m: [[1, 0], [0, -1]],
        }
    }

    pub fn reflect_y_axis() -> Self {
        Self {
            m: [[-1, 0], [0, 1]],
        }
    }

    pub fn reflect_diagonal() -> Self {
        Self {
            m: [[0, 1], [1, 0]],
        }
    }

    pub fn reflect_antidiagonal() -> Self {
        Self {
            m: [[0, -1], [-1, 0]],
        }
    }

    pub fn matrix(&self) -> [[i8; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> i8 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] as f64 * v[0] + self.m[0][1] as f64 * v[1],
            self.m[1][0] as f64 * v[0] + self.m[1][1] as f64 * v[1],
        ]
    }

    pub fn apply_int(&self, v: [i64; 2]) -> [i64; 2] {
        [
            self.m[0][0] as i64 * v[0] + self.m[0][1] as i64 * v[1],
            self.m[1][0] as i64 * v[0] + self.m[1][1] as i64 * v[1],
        ]
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.m;
        let b = other.m;
        let mut m = [[0i8; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    pub fn inverse(&self) -> Self {
        // Orthogonal: inverse is the transpose.
        Self {
            m: [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]],
        }
    }
}

/// Isometry `p -> M p + t (mod 1)` with `M` in the lattice point group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusIsometry {
    pub linear: PointGroupElement,
    pub translation: [f64; 2],
}

impl TorusIsometry {
    pub fn identity() -> Self {
        Self {
            linear: PointGroupElement::IDENTITY,
            translation: [0.0, 0.0],
        }
    }

    pub fn new(linear: PointGroupElement, translation: [f64; 2]) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn translation(t: [f64; 2]) -> Self {
        Self::new(PointGroupElement::IDENTITY, t)
    }

    pub fn apply(&self, p: TorusPoint) -> TorusPoint {
        let v = self.linear.apply(p.coords());
        TorusPoint::new(v[0] + self.translation[0], v[1] + self.translation[1])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let t = self.linear.apply(other.translation);
        Self {
            linear: self.linear.compose(&other.linear),
            translation: [
                reduce(t[0] + self.translation[0]),
                reduce(t[1] + self.translation[1]),
            ],
        }
    }
}

pub fn apply_isometry(c: &Configuration, g: &TorusIsometry) -> Configuration {
    Configuration::new(c.points().iter().map(|&p| g.apply(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> TorusPoint {
        TorusPoint::new(x, y)
    }

    #[test]
    fn reduction_maps_into_unit_interval() {
        assert_eq!(reduce(1.0), 0.0);
        assert_eq!(reduce(-0.25), 0.75);
        assert_eq!(reduce(2.5), 0.5);
        assert_eq!(reduce(-1e-20), 0.0);
        assert!((reduce(1e9 + 0.25) - 0.25).abs() < 1e-6);
    }

    #[test]
    fn distance_examples() {
        let half_diag = torus_dist(p(0.0, 0.0), p(0.5, 0.5));
        assert!((half_diag - FRAC_1_SQRT_2).abs() < 1e-15);
        let wrap = torus_dist(p(0.0, 0.0), p(0.9, 0.9));
        assert!((wrap - 0.02f64.sqrt()).abs() < 1e-15);
        assert!((torus_dist(p(0.0, 0.0), p(0.4, 0.0)) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn repeated_point_has_zero_min_distance() {
        let c = Configuration::from_coords(&[[0.1, 0.2], [0.5, 0.5], [0.1, 0.2]]);
        assert_eq!(min_pairwise_distance(&c).unwrap(), 0.0);
    }

    #[test]
    fn single_point_is_rejected() {
        let c = Configuration::from_coords(&[[0.1, 0.2]]);
        assert_eq!(min_pairwise_distance(&c), Err(Error::TooFewPoints));
    }

    #[test]
    fn density_examples() {
        let rho = density(2, FRAC_1_SQRT_2).unwrap();
        assert!((rho - PI / 4.0).abs() < 1e-15);
        let rho7 = density(7, 0.36602540).unwrap();
        assert!((rho7 - 0.73656380).abs() < 1e-8);
        assert_eq!(density(5, 0.0).unwrap(), 0.0);
        assert!(density(3, 0.8).is_err());
        assert!(density(3, -0.1).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        assert!((upper_bound_d(6) - 0.43869133).abs() < 1e-8);
        assert!((upper_bound_d(1) - 1.07456993).abs() < 1e-8);
        assert!(upper_bound_d(7) < upper_bound_d(6));
    }

    #[test]
    fn point_group_is_closed_and_has_eight_elements() {
        let all = PointGroupElement::all();
        for a in all {
            for b in all {
                assert!(all.contains(&a.compose(&b)));
            }
            assert_eq!(a.compose(&a.inverse()), PointGroupElement::IDENTITY);
        }
        let mut sorted = all.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
    }

    #[test]
    fn diagonal_reflection_swaps_coordinates() {
        let c = Configuration::from_coords(&[[0.0, 0.0], [0.3, 0.1]]);
        let g = TorusIsometry::new(PointGroupElement::reflect_diagonal(), [0.0, 0.0]);
        let img = apply_isometry(&c, &g);
        assert_eq!(img.point(0), p(0.0, 0.0));
        assert!((img.point(1).x() - 0.1).abs() < 1e-15);
        assert!((img.point(1).y() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn identity_isometry_is_trivial() {
        let c = Configuration::from_coords(&[[0.0, 0.0], [0.3, 0.1], [0.7, 0.9]]);
        assert_eq!(apply_isometry(&c, &TorusIsometry::identity()), c);
    }

    #[test]
    fn min_image_realizes_distance() {
        let a = p(0.05, 0.95);
        let b = p(0.9, 0.1);
        let (v, s) = min_image(a, b);
        assert!((v[0].hypot(v[1]) - torus_dist(a, b)).abs() < 1e-15);
        assert_eq!(s, [-1, 1]);
    }
}
