//! Enumeration of candidate contact graphs as toroidal maps.
//!
//! Underlying (multi)graphs with the requested edge count and degree window
//! are generated once per isomorphism class. For each, every rotation system
//! is visited with an odometer, maps of Euler characteristic zero are kept,
//! and duplicates are merged by canonical code.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonical_code, Dart, EmbeddedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub n: usize,
    pub e: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub allow_multi_edges: bool,
}

impl EnumerationSpec {
    /// Defaults: `E = 2N - 1`, degrees in `[3, 6]`, parallel edges only below
    /// five vertices.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            e: (2 * n).saturating_sub(1),
            min_degree: 3,
            max_degree: 6,
            allow_multi_edges: n < 5,
        }
    }

    pub fn with_edges(mut self, e: usize) -> Self {
        self.e = e;
        self
    }

    pub fn simple(mut self) -> Self {
        self.allow_multi_edges = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentSpec(m));
        if self.n == 0 {
            return bad("N must be positive".into());
        }
        if self.min_degree > self.max_degree {
            return bad(format!(
                "min degree {} > max degree {}",
                self.min_degree, self.max_degree
            ));
        }
        if 2 * self.e < self.min_degree * self.n || 2 * self.e > self.max_degree * self.n {
            return bad(format!(
                "2E = {} outside [{}, {}]",
                2 * self.e,
                self.min_degree * self.n,
                self.max_degree * self.n
            ));
        }
        if self.n > 8 {
            return bad(format!("N = {} above the supported range", self.n));
        }
        Ok(())
    }
}

/// Loopless multigraph stored as a symmetric multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    pub mult: Vec<Vec<u8>>,
}

impl Multigraph {
    pub fn n(&self) -> usize {
        self.mult.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.mult[v].iter().map(|&m| m as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edge list with parallel copies, ordered by `(i, j)` with `i < j`.
    pub fn edge_list(&self) -> Vec<[usize; 2]> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..self.mult[i][j] {
                    out.push([i, j]);
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if self.mult[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn permuted(&self, order: &[usize]) -> Vec<u8> {
        // Row-major upper triangle in the new order.
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                out.push(self.mult[order[a]][order[b]]);
            }
        }
        out
    }

    /// Canonical form: colour refinement by degrees and neighbour colours,
    /// then the minimal upper triangle over orders respecting the colours.
    pub fn canonical_form(&self) -> Vec<u8> {
        let n = self.n();
        let mut color: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        loop {
            let sigs: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
                .map(|v| {
                    let mut s: Vec<(usize, u8)> = (0..n)
                        .filter(|&w| self.mult[v][w] > 0)
                        .map(|w| (color[w], self.mult[v][w]))
                        .collect();
                    s.sort_unstable();
                    (color[v], s)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| distinct.binary_search(s).unwrap())
                .collect();
            let classes_before = {
                let mut c = color.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            color = next;
            if distinct.len() == classes_before {
                break;
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            classes.entry(color[v]).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut best: Option<Vec<u8>> = None;
        let mut order = Vec::with_capacity(n);
        search_orders(
            self,
            &classes,
            0,
            &mut order,
            &mut vec![false; n],
            &mut best,
        );
        let mut out = vec![n as u8];
        out.extend(best.unwrap());
        out
    }
}

fn search_orders(
    g: &Multigraph,
    classes: &[Vec<usize>],
    ci: usize,
    order: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut Option<Vec<u8>>,
) {
    if ci == classes.len() {
        let code = g.permuted(order);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    let class = &classes[ci];
    let placed = order.iter().filter(|&&v| class.contains(&v)).count();
    if placed == class.len() {
        search_orders(g, classes, ci + 1, order, used, best);
        return;
    }
    for &v in class {
        if !used[v] {
            used[v] = true;
            order.push(v);
            search_orders(g, classes, ci, order, used, best);
            order.pop();
            used[v] = false;
        }
    }
}

/// One representative per isomorphism class of connected loopless
/// multigraphs matching the spec's vertex count, edge count, degree window
/// and multiplicity rule. Sorted by canonical form.
pub fn underlying_graphs(spec: &EnumerationSpec) -> Result<Vec<Multigraph>> {
    spec.validate()?;
    let n = spec.n;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let max_mult = if spec.allow_multi_edges {
        spec.e as u8
    } else {
        1
    };
    let mut state = Search {
        spec,
        pairs: &pairs,
        max_mult,
        mult: vec![vec![0u8; n]; n],
        deg: vec![0; n],
        seen: HashSet::new(),
        out: Vec::new(),
    };
    state.go(0, spec.e);
    let mut out = state.out;
    out.sort_by_cached_key(|g| g.canonical_form());
    Ok(out)
}

struct Search<'a> {
    spec: &'a EnumerationSpec,
    pairs: &'a [(usize, usize)],
    max_mult: u8,
    mult: Vec<Vec<u8>>,
    deg: Vec<usize>,
    seen: HashSet<Vec<u8>>,
    out: Vec<Multigraph>,
}

impl Search<'_> {
    fn go(&mut self, k: usize, remaining: usize) {
        let n = self.spec.n;
        // Vertex i is finished once every pair touching it has been decided.
        if k > 0 {
            let (i, _) = self.pairs[k - 1];
            let finished = if k == self.pairs.len() {
                n
            } else {
                self.pairs[k].0
            };
            for v in i..finished {
                if self.deg[v] < self.spec.min_degree {
                    return;
                }
            }
        }
        if remaining == 0 {
            if self.deg.iter().all(|&d| d >= self.spec.min_degree) {
                let g = Multigraph {
                    mult: self.mult.clone(),
                };
                if g.is_connected() && self.seen.insert(g.canonical_form()) {
                    self.out.push(g);
                }
            }
            return;
        }
        if k == self.pairs.len() {
            return;
        }
        let (i, j) = self.pairs[k];
        let cap = (self.max_mult as usize)
            .min(remaining)
            .min(self.spec.max_degree - self.deg[i])
            .min(self.spec.max_degree - self.deg[j]);
        for m in (0..=cap).rev() {
            self.mult[i][j] = m as u8;
            self.mult[j][i] = m as u8;
            self.deg[i] += m;
            self.deg[j] += m;
            self.go(k + 1, remaining - m);
            self.deg[i] -= m;
            self.deg[j] -= m;
        }
        self.mult[i][j] = 0;
        self.mult[j][i] = 0;
    }
}

/// All cyclic orders of `darts` with the first element fixed in place.
pub fn cyclic_orders(darts: &[Dart]) -> Vec<Vec<Dart>> {
    if darts.len() <= 2 {
        return vec![darts.to_vec()];
    }
    let mut out = Vec::new();
    let mut rest = darts[1..].to_vec();
    permutations(&mut rest, 0, &mut |p| {
        let mut v = Vec::with_capacity(darts.len());
        v.push(darts[0]);
        v.extend_from_slice(p);
        out.push(v);
    });
    out
}

fn permutations(a: &mut Vec<Dart>, k: usize, f: &mut impl FnMut(&[Dart])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permutations(a, k + 1, f);
        a.swap(k, i);
    }
}

/// Out-darts at each vertex for the given edge list.
pub fn darts_at(n: usize, edges: &[[usize; 2]]) -> Vec<Vec<Dart>> {
    let mut at = vec![Vec::new(); n];
    for (e, &[a, b]) in edges.iter().enumerate() {
        at[a].push(2 * e);
        at[b].push(2 * e + 1);
    }
    at
}

/// Count the faces of the map whose successor permutation is `succ`.
pub fn count_faces(succ: &[Dart], mark: &mut [bool]) -> usize {
    mark.iter_mut().for_each(|m| *m = false);
    let mut faces = 0;
    for s in 0..succ.len() {
        if mark[s] {
            continue;
        }
        faces += 1;
        let mut d = s;
        while !mark[d] {
            mark[d] = true;
            d = succ[d ^ 1];
        }
    }
    faces
}

/// Visit every rotation system of `g`, calling `f` with the per-vertex
/// choice indices and the successor permutation.
pub fn for_each_rotation(g: &Multigraph, mut f: impl FnMut(&[Vec<Dart>], &[Dart])) {
    let n = g.n();
    let edges = g.edge_list();
    let orders: Vec<Vec<Vec<Dart>>> = darts_at(n, &edges)
        .iter()
        .map(|d| cyclic_orders(d))
        .collect();
    let mut idx = vec![0usize; n];
    let mut succ = vec![0usize; 2 * edges.len()];
    let mut current: Vec<Vec<Dart>> = orders.iter().map(|o| o[0].clone()).collect();
    loop {
        for v in 0..n {
            let l = &current[v];
            for i in 0..l.len() {
                succ[l[i]] = l[(i + 1) % l.len()];
            }
        }
        f(&current, &succ);
        let mut v = 0;
        loop {
            if v == n {
                return;
            }
            idx[v] += 1;
            if idx[v] < orders[v].len() {
                current[v] = orders[v][idx[v]].clone();
                break;
            }
            idx[v] = 0;
            current[v] = orders[v][0].clone();
            v += 1;
        }
    }
}

/// Distinct toroidal maps on one underlying graph, keyed by canonical code.
pub fn toroidal_maps(g: &Multigraph) -> BTreeMap<Vec<u8>, EmbeddedGraph> {
    let n = g.n();
    let edges = g.edge_list();
    let target_faces = edges.len() - n;
    let mut mark = vec![false; 2 * edges.len()];
    let mut out = BTreeMap::new();
    for_each_rotation(g, |rotation, succ| {
        if count_faces(succ, &mut mark) != target_faces {
            return;
        }
        let map = EmbeddedGraph::from_darts(n, edges.clone(), rotation.to_vec())
            .expect("odometer produces valid rotation systems");
        out.entry(canonical_code(&map)).or_insert(map);
    });
    out
}

/// One representative per isomorphism class of cellular toroidal maps that
/// satisfy the spec, sorted by canonical code.
pub fn enumerate_candidates(spec: &EnumerationSpec) -> Result<Vec<EmbeddedGraph>> {
    let graphs = underlying_graphs(spec)?;
    let parts: Vec<BTreeMap<Vec<u8>, EmbeddedGraph>> =
        graphs.par_iter().map(toroidal_maps).collect();
    let mut all = BTreeMap::new();
    for p in parts {
        all.extend(p);
    }
    Ok(all.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{candidate_filter, trace_faces};

    #[test]
    fn inconsistent_specs_are_rejected() {
        assert!(EnumerationSpec::new(6).with_edges(5).validate().is_err());
        assert!(EnumerationSpec::new(6).with_edges(19).validate().is_err());
        assert!(EnumerationSpec::new(9).validate().is_err());
    }

    #[test]
    fn four_vertices_seven_simple_edges_is_empty() {
        let spec = EnumerationSpec::new(4).with_edges(7).simple();
        assert!(enumerate_candidates(&spec).unwrap().is_empty());
    }

    #[test]
    fn k4_has_two_toroidal_maps() {
        let k4 = Multigraph {
            mult: (0..4)
                .map(|i| (0..4).map(|j| u8::from(i != j)).collect())
                .collect(),
        };
        // K4 has 16 rotation systems: 2 planar classes merge to one, and the
        // genus-one ones form the remaining classes.
        let maps = toroidal_maps(&k4);
        assert!(!maps.is_empty());
        for m in maps.values() {
            assert_eq!(trace_faces(m).count(), 2);
        }
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = Multigraph {
            mult: vec![vec![0, 1, 0], vec![1, 0, 2], vec![0, 2, 0]],
        };
        let b = Multigraph {
            mult: vec![vec![0, 2, 1], vec![2, 0, 0], vec![1, 0, 0]],
        };
        assert_eq!(a.canonical_form(), b.canonical_form());
    }

    #[test]
    fn five_vertex_candidates_pass_filter() {
        let out = enumerate_candidates(&EnumerationSpec::new(5)).unwrap();
        assert!(!out.is_empty());
        for g in &out {
            assert!(candidate_filter(g, 5));
        }
    }

    #[test]
    fn cyclic_order_count() {
        assert_eq!(cyclic_orders(&[0, 1, 2, 3, 4]).len(), 24);
        assert_eq!(cyclic_orders(&[0, 1]).len(), 1);
    }
}
