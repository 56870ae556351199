//! Polynomial systems attached to a map and a choice of cycle shifts.
//!
//! Edge-vector form: unknowns are the plane vectors `v_e` and `d`. Each face
//! but one closes up (`sum v = 0`), the two generating cycles close up to the
//! hypothesised lattice vectors, and every edge has length `d`.
//!
//! Coordinate form: unknowns are the vertex positions and `d2 = d^2 / 2`, with
//! one integer shift per edge and vertex 0 pinned at the origin.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{
    dart_sign, edge_of, shortest_independent_cycles, trace_faces, Dart, EmbeddedGraph,
    FaceStructure, Homology,
};
use crate::interval::Interval;
use crate::torus::PointGroupElement;

/// Largest edge length for which the cycle-shift bounds are proved.
pub fn shift_bound_d() -> f64 {
    5f64.sqrt() / 5.0
}

/// Nonzero lattice vectors a closed walk of `k` edges of length at most
/// `d_max` can realize: norm below `k * d_max`.
pub fn cycle_shift_set(k: usize, d_max: f64) -> Result<Vec<[i64; 2]>> {
    if d_max > shift_bound_d() * (1.0 + 1e-12) {
        return Err(Error::ShiftBound(d_max));
    }
    let r = k as f64 * d_max;
    let m = r.floor() as i64;
    let mut out = Vec::new();
    for a in -m..=m {
        for b in -m..=m {
            if (a, b) != (0, 0) && ((a * a + b * b) as f64) < r * r {
                out.push([a, b]);
            }
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    Ok(out)
}

pub type ShiftPair = ([i64; 2], [i64; 2]);

fn det(p: &ShiftPair) -> i64 {
    p.0[0] * p.1[1] - p.0[1] * p.1[0]
}

/// Canonical shift pairs for cycles of lengths `len1` and `len2`, up to torus
/// isometry. For lengths three and four these are exactly the standard
/// lists; longer cycles fall back to every unimodular pair of admissible
/// shifts.
pub fn shift_pairs(len1: usize, len2: usize, d_max: f64) -> Result<Vec<ShiftPair>> {
    let s1 = cycle_shift_set(len1, d_max)?;
    let s2 = cycle_shift_set(len2, d_max)?;
    let base = vec![([1, 0], [0, 1]), ([1, 0], [1, 1]), ([1, 0], [-1, 1])];
    let listed = match (len1, len2) {
        (3, 3) => Some(vec![([1, 0], [0, 1])]),
        (3, 4) => Some(base),
        (4, 3) => Some(base.into_iter().map(|(a, b)| (b, a)).collect()),
        (4, 4) => {
            let mut v = base;
            v.push(([1, -1], [1, 1]));
            Some(v)
        }
        _ => None,
    };
    if let Some(mut v) = listed {
        v.retain(|(a, b)| s1.contains(a) && s2.contains(b));
        return Ok(v);
    }
    let mut out = Vec::new();
    for &a in &s1 {
        for &b in &s2 {
            if det(&(a, b)).abs() == 1 {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// One representative per point-group orbit of ordered unimodular shift
/// pairs. Representatives are the lexicographically largest orbit members.
pub fn hypothesis_orbits(len1: usize, len2: usize, d_max: f64) -> Result<Vec<ShiftPair>> {
    let s1 = cycle_shift_set(len1, d_max)?;
    let s2 = cycle_shift_set(len2, d_max)?;
    let mut reps: Vec<ShiftPair> = Vec::new();
    for &a in &s1 {
        for &b in &s2 {
            if det(&(a, b)).abs() != 1 {
                continue;
            }
            let rep = PointGroupElement::all()
                .iter()
                .map(|g| (g.apply_int(a), g.apply_int(b)))
                .max()
                .unwrap();
            if !reps.contains(&rep) {
                reps.push(rep);
            }
        }
    }
    reps.sort_by(|x, y| y.cmp(x));
    Ok(reps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftHypothesis {
    pub c1: Vec<Dart>,
    pub c2: Vec<Dart>,
    pub const1: [i64; 2],
    pub const2: [i64; 2],
}

/// One vector equation `sum coeff * v_e = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorRow {
    pub terms: Vec<(usize, i64)>,
    pub rhs: [i64; 2],
}

impl VectorRow {
    fn from_walk(walk: &[Dart], rhs: [i64; 2]) -> Self {
        let mut terms: Vec<(usize, i64)> = Vec::new();
        for &d in walk {
            let e = edge_of(d);
            match terms.iter_mut().find(|t| t.0 == e) {
                Some(t) => t.1 += dart_sign(d),
                None => terms.push((e, dart_sign(d))),
            }
        }
        terms.retain(|t| t.1 != 0);
        terms.sort_unstable();
        Self { terms, rhs }
    }

    pub fn eval(&self, vectors: &[[f64; 2]]) -> [f64; 2] {
        let mut s = [-(self.rhs[0] as f64), -(self.rhs[1] as f64)];
        for &(e, c) in &self.terms {
            s[0] += c as f64 * vectors[e][0];
            s[1] += c as f64 * vectors[e][1];
        }
        s
    }
}

fn walk_sum(walk: &[Dart], vectors: &[[f64; 2]]) -> [i64; 2] {
    let mut t = [0.0, 0.0];
    for &d in walk {
        let s = dart_sign(d) as f64;
        t[0] += s * vectors[edge_of(d)][0];
        t[1] += s * vectors[edge_of(d)][1];
    }
    [t[0].round() as i64, t[1].round() as i64]
}

/// The hypothesis realised by known edge vectors on the shortest independent
/// cycles of `g`.
pub fn realised_hypothesis(g: &EmbeddedGraph, vectors: &[[f64; 2]]) -> Result<ShiftHypothesis> {
    let pair = shortest_independent_cycles(g)?;
    Ok(ShiftHypothesis {
        const1: walk_sum(&pair.c1, vectors),
        const2: walk_sum(&pair.c2, vectors),
        c1: pair.c1,
        c2: pair.c2,
    })
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub graph: EmbeddedGraph,
    pub hypothesis: ShiftHypothesis,
    pub faces: FaceStructure,
    pub dropped_face: Option<usize>,
    pub face_rows: Vec<VectorRow>,
    pub cycle_rows: [VectorRow; 2],
    /// Integer map from homology classes to lattice shifts.
    pub lattice: [[i64; 2]; 2],
    /// Lattice shift of the fundamental cycle of each edge.
    pub edge_shifts: Vec<[i64; 2]>,
}

fn mat_from_columns(a: [i64; 2], b: [i64; 2]) -> [[i64; 2]; 2] {
    [[a[0], b[0]], [a[1], b[1]]]
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn build_system(g: &EmbeddedGraph, h: &ShiftHypothesis) -> Result<ConstraintSystem> {
    build_system_with(g, h, true)
}

/// As [`build_system`], optionally keeping every face equation.
pub fn build_system_with(
    g: &EmbeddedGraph,
    h: &ShiftHypothesis,
    drop_face: bool,
) -> Result<ConstraintSystem> {
    let hom = Homology::new(g)?;
    let k1 = hom.class(g, &h.c1)?;
    let k2 = hom.class(g, &h.c2)?;
    let kd = k1[0] * k2[1] - k1[1] * k2[0];
    if kd.abs() != 1 {
        return Err(Error::DependentCycles(kd));
    }
    // Columns of K are the classes; A K = C, and K^{-1} = adj(K) / det.
    let k = mat_from_columns(k1, k2);
    let k_inv = [[k[1][1] * kd, -k[0][1] * kd], [-k[1][0] * kd, k[0][0] * kd]];
    let lattice = mat_mul(mat_from_columns(h.const1, h.const2), k_inv);
    let edge_shifts = (0..g.edge_count())
        .map(|e| {
            let c = hom.edge_class(e);
            [
                lattice[0][0] * c[0] + lattice[0][1] * c[1],
                lattice[1][0] * c[0] + lattice[1][1] * c[1],
            ]
        })
        .collect();
    let faces = trace_faces(g);
    let dropped_face = drop_face.then(|| faces.longest());
    let face_rows = faces
        .faces
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != dropped_face)
        .map(|(_, f)| VectorRow::from_walk(f, [0, 0]))
        .collect();
    let cycle_rows = [
        VectorRow::from_walk(&h.c1, h.const1),
        VectorRow::from_walk(&h.c2, h.const2),
    ];
    Ok(ConstraintSystem {
        graph: g.clone(),
        hypothesis: h.clone(),
        faces,
        dropped_face,
        face_rows,
        cycle_rows,
        lattice,
        edge_shifts,
    })
}

/// Every system for `g`: the shortest independent cycles combined with each
/// orbit representative of admissible shift pairs.
pub fn all_systems(g: &EmbeddedGraph, d_max: f64) -> Result<Vec<ConstraintSystem>> {
    let pair = shortest_independent_cycles(g)?;
    let (l1, l2) = pair.lengths();
    hypothesis_orbits(l1, l2, d_max)?
        .into_iter()
        .map(|(a, b)| {
            build_system(
                g,
                &ShiftHypothesis {
                    c1: pair.c1.clone(),
                    c2: pair.c2.clone(),
                    const1: a,
                    const2: b,
                },
            )
        })
        .collect()
}

impl ConstraintSystem {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn e(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn unknown_count(&self) -> usize {
        2 * self.e() + 1
    }

    pub fn equation_count(&self) -> usize {
        self.e() + 2 * self.face_rows.len() + 4
    }

    pub fn linear_rows(&self) -> Vec<&VectorRow> {
        self.face_rows
            .iter()
            .chain(self.cycle_rows.iter())
            .collect()
    }

    /// Residuals in the order: lengths, face rows (x then y), cycle rows.
    pub fn residuals(&self, vectors: &[[f64; 2]], d: f64) -> Vec<f64> {
        let mut out: Vec<f64> = vectors
            .iter()
            .map(|v| v[0] * v[0] + v[1] * v[1] - d * d)
            .collect();
        for row in self.linear_rows() {
            let r = row.eval(vectors);
            out.extend(r);
        }
        out
    }

    /// Integer matrix of the linear block over the edges (one row per vector
    /// equation; the same matrix acts on x and y components).
    pub fn linear_matrix(&self) -> Vec<Vec<i64>> {
        self.linear_rows()
            .iter()
            .map(|row| {
                let mut r = vec![0i64; self.e()];
                for &(e, c) in &row.terms {
                    r[e] = c;
                }
                r
            })
            .collect()
    }

    /// Structured text dump of the system.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let g = &self.graph;
        writeln!(
            s,
            "system n={} e={} equations={} unknowns={}",
            self.n(),
            self.e(),
            self.equation_count(),
            self.unknown_count()
        )
        .unwrap();
        writeln!(s, "unknowns v0..v{} (x, y), d", self.e() - 1).unwrap();
        for (e, ends) in g.edges().iter().enumerate() {
            writeln!(
                s,
                "edge {e} {} {} shift {} {}",
                ends[0], ends[1], self.edge_shifts[e][0], self.edge_shifts[e][1]
            )
            .unwrap();
        }
        for (kind, rows) in [
            ("face", &self.face_rows[..]),
            ("cycle", &self.cycle_rows[..]),
        ] {
            for row in rows {
                write!(s, "{kind}").unwrap();
                for &(e, c) in &row.terms {
                    write!(s, " {c:+}*v{e}").unwrap();
                }
                writeln!(s, " = ({}, {})", row.rhs[0], row.rhs[1]).unwrap();
            }
        }
        for e in 0..self.e() {
            writeln!(s, "length |v{e}|^2 - d^2 = 0").unwrap();
        }
        s
    }
}

/// Edge of the coordinate form: `p_head - p_tail + shift` is the edge vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordEdge {
    pub tail: usize,
    pub head: usize,
    pub shift: [i64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateSystem {
    pub n: usize,
    pub edges: Vec<CoordEdge>,
    /// Reference positions in `[0, 1)^2` used to fix the shifts.
    pub reference: Vec<[f64; 2]>,
}

/// Lift positions by integrating edge vectors along a BFS tree from vertex 0.
pub fn lift_positions(
    g: &EmbeddedGraph,
    vectors: &[[f64; 2]],
    edge_shifts: &[[i64; 2]],
) -> Vec<[f64; 2]> {
    let n = g.n();
    let mut pos: Vec<Option<[f64; 2]>> = vec![None; n];
    pos[0] = Some([0.0, 0.0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let p = pos[v].unwrap();
        for &d in g.rotation(v) {
            let w = g.head(d);
            if pos[w].is_none() {
                let e = edge_of(d);
                let s = dart_sign(d) as f64;
                pos[w] = Some([
                    p[0] + s * (vectors[e][0] - edge_shifts[e][0] as f64),
                    p[1] + s * (vectors[e][1] - edge_shifts[e][1] as f64),
                ]);
                queue.push_back(w);
            }
        }
    }
    pos.into_iter().map(|p| p.unwrap_or([0.0, 0.0])).collect()
}

/// Coordinate form of `s` around reference edge vectors (an approximate
/// solution). Shifts are exact integers; each must lie in `{-1, 0, 1}`.
pub fn to_coordinate_form(
    s: &ConstraintSystem,
    reference: &[[f64; 2]],
) -> Result<CoordinateSystem> {
    let g = &s.graph;
    if !g.is_connected() {
        return Err(Error::NotToroidal);
    }
    let lift = lift_positions(g, reference, &s.edge_shifts);
    let floor: Vec<[i64; 2]> = lift
        .iter()
        .map(|p| [p[0].floor() as i64, p[1].floor() as i64])
        .collect();
    let mut edges = Vec::with_capacity(s.e());
    for (e, &[t, h]) in g.edges().iter().enumerate() {
        let shift = [
            s.edge_shifts[e][0] + floor[h][0] - floor[t][0],
            s.edge_shifts[e][1] + floor[h][1] - floor[t][1],
        ];
        if shift.iter().any(|c| c.abs() > 1) {
            return Err(Error::ShiftOutOfRange(shift, e));
        }
        edges.push(CoordEdge {
            tail: t,
            head: h,
            shift,
        });
    }
    let reference = lift
        .iter()
        .zip(&floor)
        .map(|(p, f)| [p[0] - f[0] as f64, p[1] - f[1] as f64])
        .collect();
    Ok(CoordinateSystem {
        n: g.n(),
        edges,
        reference,
    })
}

impl CoordinateSystem {
    /// Build directly from a configuration and a contact list with shifts.
    pub fn from_edges(n: usize, edges: Vec<CoordEdge>, reference: Vec<[f64; 2]>) -> Self {
        Self {
            n,
            edges,
            reference,
        }
    }

    pub fn equation_count(&self) -> usize {
        self.edges.len() + 2
    }

    pub fn unknown_count(&self) -> usize {
        2 * self.n + 1
    }

    pub fn edge_vector(&self, e: usize, pos: &[[f64; 2]]) -> [f64; 2] {
        let c = self.edges[e];
        [
            pos[c.head][0] - pos[c.tail][0] + c.shift[0] as f64,
            pos[c.head][1] - pos[c.tail][1] + c.shift[1] as f64,
        ]
    }

    /// Residuals: the two pins, then `|v_e|^2 / 2 - d2` per edge.
    pub fn residuals(&self, pos: &[[f64; 2]], d2: f64) -> Vec<f64> {
        let mut out = vec![pos[0][0], pos[0][1]];
        for e in 0..self.edges.len() {
            let v = self.edge_vector(e, pos);
            out.push(0.5 * (v[0] * v[0] + v[1] * v[1]) - d2);
        }
        out
    }

    /// Jacobian with the pins eliminated: rows are edges, columns are
    /// `x1, y1, ..., x_{n-1}, y_{n-1}, d2`.
    pub fn reduced_jacobian(&self, pos: &[[f64; 2]]) -> Vec<Vec<f64>> {
        let cols = 2 * self.n - 1;
        self.edges
            .iter()
            .enumerate()
            .map(|(e, c)| {
                let v = self.edge_vector(e, pos);
                let mut row = vec![0.0; cols];
                if c.head != 0 {
                    row[2 * (c.head - 1)] += v[0];
                    row[2 * (c.head - 1) + 1] += v[1];
                }
                if c.tail != 0 {
                    row[2 * (c.tail - 1)] -= v[0];
                    row[2 * (c.tail - 1) + 1] -= v[1];
                }
                row[cols - 1] = -1.0;
                row
            })
            .collect()
    }

    /// Full Jacobian including the pin rows and the pinned columns.
    pub fn jacobian(&self, pos: &[[f64; 2]]) -> Vec<Vec<f64>> {
        let cols = 2 * self.n + 1;
        let mut out = vec![vec![0.0; cols]; 2];
        out[0][0] = 1.0;
        out[1][1] = 1.0;
        for (e, c) in self.edges.iter().enumerate() {
            let v = self.edge_vector(e, pos);
            let mut row = vec![0.0; cols];
            row[2 * c.head] += v[0];
            row[2 * c.head + 1] += v[1];
            row[2 * c.tail] -= v[0];
            row[2 * c.tail + 1] -= v[1];
            row[cols - 1] = -1.0;
            out.push(row);
        }
        out
    }

    pub fn dump(&self) -> String {
        let mut s = format!(
            "coordinates n={} equations={} unknowns={}\n",
            self.n,
            self.equation_count(),
            self.unknown_count()
        );
        s.push_str("pin x0 = 0\npin y0 = 0\n");
        for c in &self.edges {
            writeln!(
                s,
                "quadratic ({}, {}, {}, {})",
                c.head, c.tail, c.shift[0], c.shift[1]
            )
            .unwrap();
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisMode {
    X,
    Angle,
}

/// Affine expression `sum coeff[j] * v_free[j] + offset` over the free edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub coeff: Vec<BigRational>,
    pub offset: [BigRational; 2],
}

impl Affine {
    fn zero(k: usize) -> Self {
        Self {
            coeff: vec![BigRational::zero(); k],
            offset: [BigRational::zero(), BigRational::zero()],
        }
    }

    fn add_scaled(&mut self, other: &Affine, s: &BigRational) {
        for (a, b) in self.coeff.iter_mut().zip(&other.coeff) {
            *a += b * s;
        }
        for i in 0..2 {
            self.offset[i] += &other.offset[i] * s;
        }
    }

    pub fn coeff_intervals(&self) -> Vec<Interval> {
        self.coeff.iter().map(rational_interval).collect()
    }

    pub fn offset_intervals(&self) -> [Interval; 2] {
        [
            rational_interval(&self.offset[0]),
            rational_interval(&self.offset[1]),
        ]
    }

    pub fn eval(&self, free: &[[f64; 2]]) -> [f64; 2] {
        let mut out = [
            self.offset[0].to_f64().unwrap_or(0.0),
            self.offset[1].to_f64().unwrap_or(0.0),
        ];
        for (c, v) in self.coeff.iter().zip(free) {
            let c = c.to_f64().unwrap_or(0.0);
            out[0] += c * v[0];
            out[1] += c * v[1];
        }
        out
    }
}

/// Enclosure of a rational number.
pub fn rational_interval(r: &BigRational) -> Interval {
    if r.denom().is_one() {
        if let Some(v) = r.numer().to_i64() {
            if v.unsigned_abs() < (1u64 << 53) {
                return Interval::point(v as f64);
            }
        }
    }
    let f = r.to_f64().unwrap_or(0.0);
    Interval::point(f).inflate(0.0)
}

/// Solution of the linear block in terms of free edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    pub mode: BasisMode,
    pub free: Vec<usize>,
    /// Every edge as an affine expression in the free edge vectors.
    pub edges: Vec<Affine>,
    /// Lifted vertex positions (tree integration from vertex 0), affine in
    /// the free edge vectors.
    pub positions: Vec<Affine>,
}

pub fn linear_basis(s: &ConstraintSystem, mode: BasisMode) -> Result<Parametrization> {
    let ne = s.e();
    let rows = s.linear_rows();
    let m = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            let mut r = vec![BigRational::zero(); ne + 2];
            for &(e, c) in &row.terms {
                r[e] = BigRational::from_integer(BigInt::from(c));
            }
            r[ne] = BigRational::from_integer(BigInt::from(row.rhs[0]));
            r[ne + 1] = BigRational::from_integer(BigInt::from(row.rhs[1]));
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ne {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if pivots.len() != m {
        return Err(Error::DegenerateLinearPart {
            rank: pivots.len(),
            expected: m,
        });
    }
    if a[pivots.len()..]
        .iter()
        .any(|row| !row[ne].is_zero() || !row[ne + 1].is_zero())
    {
        return Err(Error::DegenerateLinearPart {
            rank: pivots.len(),
            expected: m,
        });
    }
    let free: Vec<usize> = (0..ne).filter(|c| !pivots.contains(c)).collect();
    let k = free.len();
    let mut edges: Vec<Affine> = vec![Affine::zero(k); ne];
    for (j, &f) in free.iter().enumerate() {
        edges[f].coeff[j] = BigRational::one();
    }
    for (row, &p) in pivots.iter().enumerate() {
        let e = &mut edges[p];
        for (j, &f) in free.iter().enumerate() {
            e.coeff[j] = -a[row][f].clone();
        }
        e.offset = [a[row][ne].clone(), a[row][ne + 1].clone()];
    }
    // Positions: p_head = p_tail + v_e - shift_e along the BFS tree.
    let g = &s.graph;
    let mut positions: Vec<Option<Affine>> = vec![None; g.n()];
    positions[0] = Some(Affine::zero(k));
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &d in g.rotation(v) {
            let w = g.head(d);
            if positions[w].is_none() {
                let e = edge_of(d);
                let sign = BigRational::from_integer(BigInt::from(dart_sign(d)));
                let mut p = positions[v].clone().unwrap();
                p.add_scaled(&edges[e], &sign);
                for i in 0..2 {
                    p.offset[i] -=
                        &sign * BigRational::from_integer(BigInt::from(s.edge_shifts[e][i]));
                }
                positions[w] = Some(p);
                queue.push_back(w);
            }
        }
    }
    Ok(Parametrization {
        mode,
        free,
        edges,
        positions: positions
            .into_iter()
            .map(|p| p.unwrap_or_else(|| Affine::zero(k)))
            .collect(),
    })
}

impl Parametrization {
    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Sanity check that the rational data is small enough for `f64`.
    pub fn max_coefficient(&self) -> f64 {
        self.edges
            .iter()
            .flat_map(|a| a.coeff.iter())
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}
