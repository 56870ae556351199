//! Reference graphs with reference edge bounds, and the degenerate
//! seven-vertex graph whose differential is singular at its solution.

use crate::atlas::{embed_by_vectors, integrate_positions, u7, ContactGraph};
use crate::error::Result;
use crate::graph::{dart_sign, edge_of, EmbeddedGraph};
use crate::interval::Interval;
use crate::solver::{BoxStatus, Mode, SolutionBox};
use crate::system::ConstraintSystem;
use crate::torus::Configuration;

/// Reference enclosure of one edge vector, from `tail` to `head`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeBounds {
    pub name: &'static str,
    pub tail: usize,
    pub head: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl EdgeBounds {
    pub fn mid(&self) -> [f64; 2] {
        [0.5 * (self.x.0 + self.x.1), 0.5 * (self.y.0 + self.y.1)]
    }

    pub fn width(&self) -> f64 {
        (self.x.1 - self.x.0).max(self.y.1 - self.y.0)
    }
}

const fn eb(
    name: &'static str,
    tail: usize,
    head: usize,
    x: (f64, f64),
    y: (f64, f64),
) -> EdgeBounds {
    EdgeBounds {
        name,
        tail,
        head,
        x,
        y,
    }
}

// Vertices a..f are 0..5.
pub const G1_BOUNDS: [EdgeBounds; 11] = [
    eb("ab", 0, 1, (0.346659, 0.34685), (-0.200409, -0.200038)),
    eb("ac", 0, 2, (0.346668, 0.34686), (0.200022, 0.200375)),
    eb("ad", 0, 3, (-0.265502, -0.265339), (0.299724, 0.299871)),
    eb("ae", 0, 4, (-0.265475, -0.265366), (-0.29985, -0.299742)),
    eb("bf", 1, 5, (-0.265466, -0.265357), (-0.29988, -0.299747)),
    eb("be", 1, 4, (0.387784, 0.387866), (-0.0997594, -0.0994001)),
    eb("cd", 2, 3, (0.38772, 0.387911), (0.099223, 0.100013)),
    eb("cf", 2, 5, (-0.265475, -0.265339), (0.299738, 0.299875)),
    eb("df", 3, 5, (0.346668, 0.34686), (0.200036, 0.200367)),
    eb("de", 3, 4, (-0.000109204, 0.000109204), (0.4004, 0.400427)),
    eb("ef", 4, 5, (0.346696, 0.346832), (-0.200325, -0.200083)),
];

pub const G2_BOUNDS: [EdgeBounds; 11] = [
    eb("ab", 0, 1, (0.299465, 0.30012), (0.265043, 0.265794)),
    eb("ac", 0, 2, (-0.300166, -0.299428), (0.265001, 0.265842)),
    eb("ad", 0, 3, (-0.200635, -0.199762), (-0.347011, -0.346512)),
    eb("be", 1, 4, (0.200062, 0.200362), (-0.346848, -0.346663)),
    eb("bc", 1, 2, (0.400342, 0.400452), (-0.00759171, 0.00810797)),
    eb("bf", 1, 5, (-0.0997579, -0.0994303), (0.387787, 0.387861)),
    eb("cd", 2, 3, (0.0992846, 0.0998033), (0.387762, 0.387948)),
    eb("ce", 2, 4, (-0.200335, -0.200062), (-0.346848, -0.346687)),
    eb("de", 3, 4, (-0.299865, -0.299592), (0.265332, 0.265718)),
    eb("df", 3, 5, (0.400397, 0.400451), (-0.00456848, 0.00469225)),
    eb("ef", 4, 5, (-0.299956, -0.299738), (-0.265484, -0.265304)),
];

fn from_bounds(bounds: &[EdgeBounds]) -> Result<ContactGraph> {
    let edges = bounds.iter().map(|b| [b.tail, b.head]).collect();
    let vectors: Vec<[f64; 2]> = bounds.iter().map(|b| b.mid()).collect();
    let graph = embed_by_vectors(6, edges, &vectors)?;
    Ok(ContactGraph { graph, vectors })
}

pub fn g1() -> ContactGraph {
    from_bounds(&G1_BOUNDS).expect("fixture is well formed")
}

pub fn g2() -> ContactGraph {
    from_bounds(&G2_BOUNDS).expect("fixture is well formed")
}

/// Exact edge vectors of the degenerate seven-vertex graph, edges `v1..v13`.
pub fn degenerate_seven() -> ContactGraph {
    let u = u7();
    let a = u / 2.0;
    let b = 3f64.sqrt() * u / 2.0;
    let spec: [(usize, usize, [f64; 2]); 13] = [
        (4, 3, [a, b]),
        (2, 4, [-a, b]),
        (3, 2, [0.0, u]),
        (0, 3, [b, -a]),
        (5, 0, [u, 0.0]),
        (3, 5, [b, a]),
        (1, 0, [a, -b]),
        (1, 4, [b, a]),
        (1, 5, [-a, -b]),
        (6, 1, [b, -a]),
        (2, 6, [a, b]),
        (3, 6, [a, -b]),
        (4, 6, [u, 0.0]),
    ];
    let edges = spec.iter().map(|s| [s.0, s.1]).collect();
    let vectors: Vec<[f64; 2]> = spec.iter().map(|s| s.2).collect();
    let graph = embed_by_vectors(7, edges, &vectors).expect("fixture is well formed");
    ContactGraph { graph, vectors }
}

/// Vertex positions of the degenerate seven-vertex solution.
pub fn degenerate_seven_config() -> Configuration {
    let cg = degenerate_seven();
    integrate_positions(&cg.graph, &cg.vectors)
}

/// The optimal six-disk contact graph minus one edge, for every edge whose
/// removal keeps all degrees at least three; one representative per map
/// isomorphism class.
pub fn six_point_reductions() -> Vec<EmbeddedGraph> {
    use crate::atlas::{contact_graph, known_entry};
    use crate::graph::{candidate_filter, canonical_code};
    let e = known_entry(6, 1).expect("atlas has N = 6");
    let cg = contact_graph(&e.config, e.d, 1e-9).expect("atlas contacts are clean");
    let mut seen = std::collections::BTreeMap::new();
    for k in 0..cg.graph.edge_count() {
        let h = cg.graph.without_edge(k);
        if candidate_filter(&h, 6) {
            seen.entry(canonical_code(&h)).or_insert(h);
        }
    }
    seen.into_values().collect()
}

/// The reference enclosure of a reference graph as a solution box of `s`,
/// with positions integrated along a breadth-first tree from vertex 0.
pub fn reference_box(s: &ConstraintSystem, bounds: &[EdgeBounds]) -> SolutionBox {
    let g = &s.graph;
    let edges: Vec<[Interval; 2]> = bounds
        .iter()
        .map(|b| [Interval::new(b.x.0, b.x.1), Interval::new(b.y.0, b.y.1)])
        .collect();
    let mut positions: Vec<Option<[Interval; 2]>> = vec![None; g.n()];
    positions[0] = Some([Interval::ZERO, Interval::ZERO]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let p = positions[v].unwrap();
        for &dart in g.rotation(v) {
            let w = g.head(dart);
            if positions[w].is_none() {
                let e = edge_of(dart);
                let sg = dart_sign(dart) as f64;
                let step = |a: usize| (edges[e][a] - s.edge_shifts[e][a] as f64) * sg;
                positions[w] = Some([p[0] + step(0), p[1] + step(1)]);
                queue.push_back(w);
            }
        }
    }
    let d = edges
        .iter()
        .map(|v| (v[0].sqr() + v[1].sqr()).sqrt().expect("nonnegative"))
        .reduce(|a, b| a.intersect(&b).unwrap_or(a.hull(&b)))
        .expect("edges");
    SolutionBox {
        mode: Mode::Angle,
        vars: Vec::new(),
        d,
        edges,
        positions: positions
            .into_iter()
            .map(|p| p.expect("connected"))
            .collect(),
        status: BoxStatus::Possible,
    }
}

/// A single-edge deletion of the six-disk optimum contact graph isomorphic
/// to `g`, with exact edge vectors.
pub fn exact_reduction(g: &EmbeddedGraph) -> Option<ContactGraph> {
    use crate::atlas::{contact_graph, known_entry};
    use crate::graph::canonical_code;
    let target = canonical_code(g);
    let e = known_entry(6, 1).ok()?;
    let cg = contact_graph(&e.config, e.d, 1e-9).ok()?;
    (0..cg.graph.edge_count()).find_map(|k| {
        let h = cg.graph.without_edge(k);
        (canonical_code(&h) == target).then(|| {
            let mut vectors = cg.vectors.clone();
            vectors.remove(k);
            ContactGraph { graph: h, vectors }
        })
    })
}

/// The four reference graphs: the two with tabulated bounds followed by the
/// remaining reductions of the six-disk optimum in canonical-code order.
pub fn reference_graphs() -> Vec<EmbeddedGraph> {
    use crate::graph::canonical_code;
    let known = [g1().graph, g2().graph];
    let codes: Vec<Vec<u8>> = known.iter().map(canonical_code).collect();
    let mut out = known.to_vec();
    out.extend(
        six_point_reductions()
            .into_iter()
            .filter(|g| !codes.contains(&canonical_code(g))),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{contact_graph, known_entry};
    use crate::graph::{candidate_filter, canonical_code, is_toroidal_cellular, trace_faces};
    use crate::torus::min_pairwise_distance;

    #[test]
    fn reference_graphs_are_candidates() {
        assert!(candidate_filter(&g1().graph, 6));
        assert!(candidate_filter(&g2().graph, 6));
        assert_ne!(canonical_code(&g1().graph), canonical_code(&g2().graph));
    }

    #[test]
    fn reference_graphs_are_reductions_of_the_optimum() {
        let red: Vec<Vec<u8>> = six_point_reductions().iter().map(canonical_code).collect();
        assert!(red.contains(&canonical_code(&g1().graph)));
        assert!(red.contains(&canonical_code(&g2().graph)));
    }

    #[test]
    fn optimum_has_four_reductions() {
        assert_eq!(six_point_reductions().len(), 4);
        let refs = reference_graphs();
        assert_eq!(refs.len(), 4);
        let mut codes: Vec<Vec<u8>> = refs.iter().map(canonical_code).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), 4);
    }

    #[test]
    fn exact_reductions_exist_for_reference_graphs() {
        for g in reference_graphs() {
            let cg = exact_reduction(&g).unwrap();
            assert_eq!(cg.graph.edge_count(), 11);
            assert_eq!(canonical_code(&cg.graph), canonical_code(&g));
        }
    }

    #[test]
    fn degenerate_graph_shape() {
        let cg = degenerate_seven();
        assert!(is_toroidal_cellular(&cg.graph));
        let mut lens = trace_faces(&cg.graph).lengths();
        lens.sort_unstable();
        assert_eq!(lens, vec![3, 3, 3, 5, 5, 7]);
        for v in &cg.vectors {
            assert!((v[0].hypot(v[1]) - u7()).abs() < 1e-15);
        }
        let c = degenerate_seven_config();
        assert!((min_pairwise_distance(&c).unwrap() - u7()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_graph_sits_inside_seven_disk_optimum() {
        let e = known_entry(7, 2).unwrap();
        let full = contact_graph(&e.config, e.d, 1e-9).unwrap();
        assert_eq!(full.graph.edge_count(), 15);
        assert_eq!(degenerate_seven().graph.edge_count(), 13);
    }
}
