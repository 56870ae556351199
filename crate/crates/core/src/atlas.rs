//! Best known configurations for N = 2..9 and their contact graphs.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;
use crate::torus::{Configuration, TorusPoint, SHIFTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Proven,
    Conjectured,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtlasEntry {
    pub n: usize,
    pub variant: usize,
    pub status: Status,
    pub d: f64,
    pub d_expr: &'static str,
    pub config: Configuration,
    /// Index of a free disk placed at the centroid of its admissible region.
    pub free_vertex: Option<usize>,
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// `1 / (1 + sqrt 3)`, the common distance for seven and eight disks.
pub fn u7() -> f64 {
    1.0 / (1.0 + sqrt3())
}

/// Coordinate `(a + b sqrt 3) u / 2`, the lattice spanned by the six edge
/// directions of the seven- and eight-disk optima.
fn hu(a: i32, b: i32) -> f64 {
    (a as f64 + b as f64 * sqrt3()) * u7() / 2.0
}

fn hp(a: i32, b: i32, c: i32, e: i32) -> [f64; 2] {
    [hu(a, b), hu(c, e)]
}

pub fn exact_d(n: usize) -> Result<(f64, &'static str)> {
    let s3 = sqrt3();
    Ok(match n {
        2 => (FRAC_1_SQRT_2, "sqrt(2)/2"),
        3 | 4 => ((6f64.sqrt() - 2f64.sqrt()) / 2.0, "(sqrt(6) - sqrt(2))/2"),
        5 => (5f64.sqrt() / 5.0, "sqrt(5)/5"),
        6 => (
            s3 / 2.0 - 2f64.sqrt() * (3.0 * s3 + 2.0).sqrt() / 6.0 + 1.0 / 6.0,
            "sqrt(3)/2 - sqrt(2) sqrt(3 sqrt(3) + 2)/6 + 1/6",
        ),
        7 | 8 => (u7(), "1/(1 + sqrt(3))"),
        9 => (1.0 / (5.0 + 2.0 * s3).sqrt(), "1/sqrt(5 + 2 sqrt(3))"),
        _ => return Err(Error::NoAtlasEntry(n)),
    })
}

pub fn variant_count(n: usize) -> usize {
    if n == 7 {
        3
    } else {
        1
    }
}

fn six_point_coords() -> Vec<[f64; 2]> {
    let s = sqrt3();
    let r = 2f64.sqrt() * (3.0 * s + 2.0).sqrt();
    let y1 = -(1.0 / 12.0) * (-3.0 * s + r - 1.0) * s;
    let y45 = 1.25 + s / 4.0 - r / 4.0;
    vec![
        [0.0, 0.0],
        [s / 4.0 - r / 12.0 + 1.0 / 12.0, y1],
        [11.0 / 12.0 - s / 4.0 + r / 12.0, y1],
        [0.5, 1.0 - s * r / 12.0 + s / 3.0 - r / 4.0],
        [5.0 / 12.0 - s / 4.0 + r / 12.0, y45],
        [7.0 / 12.0 + s / 4.0 - r / 12.0, y45],
    ]
}

/// Nine-disk coordinates, reconstructed numerically so that all 22 contacts
/// have length `1/sqrt(5 + 2 sqrt 3)`.
#[allow(clippy::excessive_precision)]
const NINE: [[f64; 2]; 9] = [
    [0.0, 0.0],
    [0.55907301480239405434, 0.79536507401197027172],
    [0.61814602960478810869, 0.4567555518083791902],
    [0.94092698519760594566, 0.33860952220359108152],
    [0.22046349259880297283, 0.73629205920957621738],
    [0.67721904440718216303, 0.11814602960478810869],
    [0.27953650740119702717, 0.39768253700598513586],
    [0.33860952220359108152, 0.059073014802394054344],
    [0.88185397039521189131, 0.67721904440718216303],
];

pub fn known_entry(n: usize, variant: usize) -> Result<AtlasEntry> {
    let (d, d_expr) = exact_d(n)?;
    if variant == 0 || variant > variant_count(n) {
        return Err(Error::InvalidVariant { n, variant });
    }
    let s3 = sqrt3();
    let mut free_vertex = None;
    let coords: Vec<[f64; 2]> = match (n, variant) {
        (2, _) => vec![[0.0, 0.0], [0.5, 0.5]],
        (3, _) => vec![
            [0.0, 0.0],
            [0.5, s3 / 2.0],
            [(s3 - 1.0) / 2.0, (s3 - 1.0) / 2.0],
        ],
        (4, _) => vec![
            [0.0, 0.0],
            [0.5, s3 / 2.0],
            [(s3 - 1.0) / 2.0, (s3 - 1.0) / 2.0],
            [s3 / 2.0, 0.5],
        ],
        (5, _) => vec![[0.0, 0.0], [0.4, 0.2], [0.8, 0.4], [0.2, 0.6], [0.6, 0.8]],
        (6, _) => six_point_coords(),
        (7, 1) => {
            // Twelve contacts among six disks plus a free disk at the centre
            // of symmetry of its admissible region.
            free_vertex = Some(6);
            vec![
                hp(0, 0, 0, 0),
                hp(-2, 0, -2, 0),
                hp(-2, 0, 0, 0),
                hp(0, 1, -1, 0),
                hp(0, 0, -2, 0),
                hp(-1, 0, 0, 1),
                hp(0, 1, 0, 1),
            ]
        }
        (7, 2) => vec![
            hp(0, 0, 0, 0),
            hp(-1, 0, 0, 1),
            hp(-1, 1, 1, 1),
            hp(-2, 0, 0, 0),
            hp(0, 1, 1, 0),
            hp(-1, 0, 0, -1),
            hp(0, 1, -1, 0),
        ],
        (7, 3) => vec![
            hp(0, 0, 0, 0),
            hp(0, -1, 1, 0),
            hp(0, 0, -2, 0),
            hp(-1, -1, 1, 1),
            hp(2, 0, 0, 0),
            hp(0, -1, -1, 0),
            hp(1, 0, 0, 1),
        ],
        (8, _) => vec![
            hp(0, 0, 0, 0),
            hp(-1, -1, 1, 1),
            hp(-1, 1, 1, 1),
            hp(-1, 0, 0, 1),
            hp(0, 1, 1, 0),
            hp(-1, 0, 0, -1),
            hp(-2, 0, 0, 0),
            hp(0, 1, -1, 0),
        ],
        (9, _) => NINE.to_vec(),
        _ => unreachable!(),
    };
    Ok(AtlasEntry {
        n,
        variant,
        status: if n == 9 {
            Status::Conjectured
        } else {
            Status::Proven
        },
        d,
        d_expr,
        config: Configuration::from_coords(&coords),
        free_vertex,
    })
}

pub fn known_config(n: usize, variant: usize) -> Result<Configuration> {
    Ok(known_entry(n, variant)?.config)
}

/// A map built from geometry, with the plane vector of every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactGraph {
    pub graph: EmbeddedGraph,
    /// `vectors[e]` runs from `edges[e][0]` to the image of `edges[e][1]`.
    pub vectors: Vec<[f64; 2]>,
}

/// Embed edges with known plane vectors: each vertex orders its out-darts
/// clockwise by direction, starting from the largest angle.
pub fn embed_by_vectors(
    n: usize,
    edges: Vec<[usize; 2]>,
    vectors: &[[f64; 2]],
) -> Result<EmbeddedGraph> {
    let mut at: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for (e, v) in vectors.iter().enumerate() {
        let [a, b] = edges[e];
        at[a].push((v[1].atan2(v[0]), 2 * e));
        at[b].push(((-v[1]).atan2(-v[0]), 2 * e + 1));
    }
    let rotation = at
        .into_iter()
        .map(|mut l| {
            l.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
            l.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    EmbeddedGraph::from_darts(n, edges, rotation)
}

/// Contact graph: pairs (with lattice shift) at distance within relative
/// tolerance `tol` of `d`. Pairs in the band between `tol` and `2 tol` are
/// reported as ambiguous.
pub fn contact_graph(c: &Configuration, d: f64, tol: f64) -> Result<ContactGraph> {
    let n = c.len();
    let mut edges = Vec::new();
    let mut vectors = Vec::new();
    let mut ambiguous = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (c.point(i), c.point(j));
            for s in SHIFTS {
                let v = [q.x() - p.x() + s[0] as f64, q.y() - p.y() + s[1] as f64];
                let len = v[0].hypot(v[1]);
                let rel = (len - d).abs() / d;
                if rel <= tol {
                    edges.push([i, j]);
                    vectors.push(v);
                } else if rel <= 2.0 * tol {
                    ambiguous.push((i, j));
                }
            }
        }
    }
    if !ambiguous.is_empty() {
        ambiguous.dedup();
        return Err(Error::AmbiguousContacts(ambiguous));
    }
    let graph = embed_by_vectors(n, edges, &vectors)?;
    Ok(ContactGraph { graph, vectors })
}

/// Evaluate points `p_v` from edge vectors by integrating along a BFS tree
/// from vertex 0; the result is reduced onto the torus.
pub fn integrate_positions(g: &EmbeddedGraph, vectors: &[[f64; 2]]) -> Configuration {
    let n = g.n();
    let mut pos: Vec<Option<[f64; 2]>> = vec![None; n];
    pos[0] = Some([0.0, 0.0]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let p = pos[v].unwrap();
        for &d in g.rotation(v) {
            let w = g.head(d);
            if pos[w].is_none() {
                let e = d / 2;
                let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                pos[w] = Some([p[0] + sign * vectors[e][0], p[1] + sign * vectors[e][1]]);
                queue.push_back(w);
            }
        }
    }
    Configuration::new(
        pos.into_iter()
            .map(|p| {
                let p = p.unwrap_or([0.0, 0.0]);
                TorusPoint::new(p[0], p[1])
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_toroidal_cellular, trace_faces};
    use crate::torus::{min_pairwise_distance, upper_bound_d};

    #[test]
    fn min_distance_matches_closed_form() {
        for n in 2..=9 {
            for v in 1..=variant_count(n) {
                let e = known_entry(n, v).unwrap();
                let m = min_pairwise_distance(&e.config).unwrap();
                assert!((m - e.d).abs() < 1e-10, "N={n} variant {v}: {m} vs {}", e.d);
            }
        }
    }

    #[test]
    fn closed_forms_are_bounded_and_decreasing() {
        let mut prev = f64::INFINITY;
        for n in 2..=9 {
            let (d, _) = exact_d(n).unwrap();
            assert!(d <= upper_bound_d(n));
            assert!(d <= prev + 1e-15);
            prev = d;
        }
        assert!((exact_d(6).unwrap().0 - 0.40040555).abs() < 1e-7);
    }

    #[test]
    fn out_of_range_requests_fail() {
        assert_eq!(exact_d(10), Err(Error::NoAtlasEntry(10)));
        assert_eq!(known_config(1, 1), Err(Error::NoAtlasEntry(1)));
        assert!(known_config(7, 4).is_err());
        assert!(known_config(6, 2).is_err());
    }

    #[test]
    fn contact_counts() {
        let count = |n, v| {
            let e = known_entry(n, v).unwrap();
            contact_graph(&e.config, e.d, 1e-9)
                .unwrap()
                .graph
                .edge_count()
        };
        assert_eq!(count(2, 1), 4);
        assert_eq!(count(6, 1), 12);
        assert_eq!(count(7, 1), 12);
        assert_eq!(count(7, 2), 15);
        assert_eq!(count(7, 3), 14);
        assert_eq!(count(8, 1), 20);
        assert_eq!(count(9, 1), 22);
    }

    #[test]
    fn contact_graphs_are_cellular() {
        for (n, v) in [
            (2, 1),
            (3, 1),
            (4, 1),
            (5, 1),
            (6, 1),
            (7, 2),
            (7, 3),
            (8, 1),
            (9, 1),
        ] {
            let e = known_entry(n, v).unwrap();
            let cg = contact_graph(&e.config, e.d, 1e-9).unwrap();
            assert!(is_toroidal_cellular(&cg.graph), "N={n} variant {v}");
        }
    }

    #[test]
    fn free_disk_has_no_contacts() {
        let e = known_entry(7, 1).unwrap();
        let cg = contact_graph(&e.config, e.d, 1e-9).unwrap();
        assert_eq!(cg.graph.degree(6), 0);
        assert_eq!(e.free_vertex, Some(6));
    }

    #[test]
    fn positions_integrate_back() {
        let e = known_entry(6, 1).unwrap();
        let cg = contact_graph(&e.config, e.d, 1e-9).unwrap();
        let back = integrate_positions(&cg.graph, &cg.vectors);
        for i in 0..6 {
            assert!(crate::torus::torus_dist(back.point(i), e.config.point(i)) < 1e-12);
        }
        assert_eq!(trace_faces(&cg.graph).count(), 6);
    }
}
