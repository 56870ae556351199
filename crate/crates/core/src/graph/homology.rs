//! First homology of a cellular map via Smith normal form.
//!
//! Cycles are coordinatized by their coefficients on the non-tree edges of a
//! breadth-first spanning tree; these coefficients determine a cycle uniquely.
//! Face boundaries span `B1` inside those coordinates, and the Smith form of
//! the boundary matrix splits off the free part `H1`.

use std::collections::VecDeque;

use super::{dart_sign, edge_of, is_closed_walk, trace_faces, Dart, EmbeddedGraph};
use crate::error::{Error, Result};

/// `left * m * right = diag` with unimodular `left` and `right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: Vec<i64>,
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn narrow(m: Vec<Vec<i128>>) -> Result<Vec<Vec<i64>>> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    i64::try_from(v).map_err(|_| Error::Homology("coefficient overflow".into()))
                })
                .collect()
        })
        .collect()
}

/// Smith normal form of a `rows x cols` integer matrix.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<SmithForm> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0
                    && pivot.is_none_or(|(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in right.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = false;
        for i in t + 1..rows {
            let q = a[i][t].div_euclid(a[t][t]);
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
                for j in 0..rows {
                    left[i][j] -= q * left[t][j];
                }
            }
            dirty |= a[i][t] != 0;
        }
        for j in t + 1..cols {
            let q = a[t][j].div_euclid(a[t][t]);
            if q != 0 {
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
                for row in right.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            dirty |= a[t][j] != 0;
        }
        if dirty {
            continue;
        }
        // Enforce divisibility of the trailing block by folding a bad row in.
        let p = a[t][t];
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
        if let Some(i) = bad {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            for j in 0..rows {
                left[t][j] += left[i][j];
            }
            continue;
        }
        if p < 0 {
            for j in t..cols {
                a[t][j] = -a[t][j];
            }
            for j in 0..rows {
                left[t][j] = -left[t][j];
            }
        }
        t += 1;
    }
    let diag = (0..rows.min(cols))
        .map(|i| i64::try_from(a[i][i]).map_err(|_| Error::Homology("coefficient overflow".into())))
        .collect::<Result<Vec<_>>>()?;
    let rank = diag.iter().filter(|&&v| v != 0).count();
    Ok(SmithForm {
        diag,
        left: narrow(left)?,
        right: narrow(right)?,
        rank,
    })
}

/// A closed walk with its homology class in the basis fixed by a [`Homology`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    pub cycle: Vec<Dart>,
    pub cls: [i64; 2],
}

impl CycleClass {
    pub fn is_zero(&self) -> bool {
        self.cls == [0, 0]
    }
}

/// Homology data for one toroidal map: spanning tree, boundary Smith form and
/// the projection onto the free part.
#[derive(Clone, Debug)]
pub struct Homology {
    tree_parent: Vec<Option<Dart>>,
    nontree_index: Vec<Option<usize>>,
    projection: Vec<[i64; 2]>,
}

impl Homology {
    pub fn new(g: &EmbeddedGraph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Homology("map is not connected".into()));
        }
        let n = g.n();
        let ne = g.edge_count();
        let mut tree_parent: Vec<Option<Dart>> = vec![None; n];
        let mut in_tree = vec![false; ne];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &d in g.rotation(v) {
                let w = g.head(d);
                if !seen[w] {
                    seen[w] = true;
                    tree_parent[w] = Some(d);
                    in_tree[edge_of(d)] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut nontree_index = vec![None; ne];
        let mut k = 0;
        for e in 0..ne {
            if !in_tree[e] {
                nontree_index[e] = Some(k);
                k += 1;
            }
        }
        let faces = trace_faces(g);
        let mut m = vec![vec![0i64; faces.count()]; k];
        for (f, walk) in faces.faces.iter().enumerate() {
            for &d in walk {
                if let Some(i) = nontree_index[edge_of(d)] {
                    m[i][f] += dart_sign(d);
                }
            }
        }
        let snf = smith_normal_form(&m)?;
        if snf.diag.iter().any(|&v| v != 0 && v.abs() != 1) {
            return Err(Error::Homology("torsion in first homology".into()));
        }
        let betti = k - snf.rank;
        if betti != 2 {
            return Err(Error::Homology(format!(
                "first Betti number {betti}, expected 2"
            )));
        }
        let r = snf.rank;
        let projection = (0..k)
            .map(|j| [snf.left[r][j], snf.left[r + 1][j]])
            .collect();
        Ok(Self {
            tree_parent,
            nontree_index,
            projection,
        })
    }

    /// Coefficients of a closed walk on the non-tree edges.
    fn coords(&self, walk: &[Dart]) -> Vec<i64> {
        let mut c = vec![0i64; self.projection.len()];
        for &d in walk {
            if let Some(i) = self.nontree_index[edge_of(d)] {
                c[i] += dart_sign(d);
            }
        }
        c
    }

    pub fn class(&self, g: &EmbeddedGraph, walk: &[Dart]) -> Result<[i64; 2]> {
        if !is_closed_walk(g, walk) {
            return Err(Error::OpenWalk);
        }
        Ok(self.class_of_coords(&self.coords(walk)))
    }

    pub fn cycle_class(&self, g: &EmbeddedGraph, walk: &[Dart]) -> Result<CycleClass> {
        Ok(CycleClass {
            cycle: walk.to_vec(),
            cls: self.class(g, walk)?,
        })
    }

    fn class_of_coords(&self, c: &[i64]) -> [i64; 2] {
        let mut out = [0i64; 2];
        for (ci, p) in c.iter().zip(&self.projection) {
            out[0] += ci * p[0];
            out[1] += ci * p[1];
        }
        out
    }

    /// Class of the fundamental cycle of edge `e` (zero for tree edges): the
    /// forward dart of `e` closed up through the spanning tree.
    pub fn edge_class(&self, e: usize) -> [i64; 2] {
        match self.nontree_index[e] {
            Some(i) => self.projection[i],
            None => [0, 0],
        }
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.nontree_index[e].is_none()
    }

    /// Tree dart entering `v` from its parent, if `v` is not the root.
    pub fn tree_parent(&self, v: usize) -> Option<Dart> {
        self.tree_parent[v]
    }
}

/// Determinant of two classes taken as rows.
pub fn det2(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::grid_torus;
    use super::*;
    use crate::graph::trace_faces;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let m = b.first().map_or(0, |r| r.len());
        let k = b.len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_form_of_textbook_matrix() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diag, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&s.left, &m), &s.right);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i][j], if i == j { s.diag[i] } else { 0 });
            }
        }
    }

    #[test]
    fn smith_form_of_rectangular_matrix() {
        let m = vec![vec![1, 1, 0], vec![0, 0, 0], vec![-1, -1, 0], vec![0, 2, 2]];
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.rank, 2);
        let d = mat_mul(&mat_mul(&s.left, &m), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(v, 0);
                }
            }
        }
    }

    #[test]
    fn faces_have_zero_class() {
        let g = grid_torus(3);
        let h = Homology::new(&g).unwrap();
        for f in trace_faces(&g).faces {
            assert_eq!(h.class(&g, &f).unwrap(), [0, 0]);
        }
    }

    #[test]
    fn grid_generators_are_unimodular() {
        let g = grid_torus(3);
        let h = Homology::new(&g).unwrap();
        // Follow the first dart (east) three times, then the last (north).
        let walk = |slot: usize| {
            let mut v = 0;
            let mut w = Vec::new();
            for _ in 0..3 {
                let d = g.rotation(v)[slot];
                w.push(d);
                v = g.head(d);
            }
            w
        };
        let a = h.class(&g, &walk(0)).unwrap();
        let b = h.class(&g, &walk(3)).unwrap();
        assert_eq!(det2(a, b).abs(), 1);
    }

    #[test]
    fn open_walk_is_rejected() {
        let g = grid_torus(3);
        let h = Homology::new(&g).unwrap();
        let d = g.rotation(0)[0];
        assert_eq!(h.class(&g, &[d]), Err(Error::OpenWalk));
    }
}
