//! Canonical codes for maps up to relabeling and orientation reversal.
//!
//! A map is the pair of dart permutations `(sigma, alpha)`. Starting from a
//! dart and an orientation, a breadth-first traversal labels darts in order of
//! discovery; the code lists `(label(sigma d), label(alpha d))` for every dart
//! in label order. The minimum over all starts and both orientations is an
//! isomorphism invariant, and it determines the map.

use std::cmp::Ordering;

use super::{rev, Dart, EmbeddedGraph};

fn sigma(g: &EmbeddedGraph, d: Dart, forward: bool) -> Dart {
    if forward {
        g.succ(d)
    } else {
        g.pred(d)
    }
}

/// Traverse from `start`; abort as soon as the code exceeds `best`.
fn traverse(
    g: &EmbeddedGraph,
    start: Dart,
    forward: bool,
    labels: &mut [u16],
    order: &mut Vec<Dart>,
    best: Option<&[u16]>,
) -> Option<Vec<u16>> {
    labels.iter_mut().for_each(|l| *l = u16::MAX);
    order.clear();
    labels[start] = 0;
    order.push(start);
    let mut code = Vec::with_capacity(2 * labels.len());
    let mut tight = best.is_some();
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for nb in [sigma(g, d, forward), rev(d)] {
            if labels[nb] == u16::MAX {
                labels[nb] = order.len() as u16;
                order.push(nb);
            }
            let v = labels[nb];
            if tight {
                match v.cmp(&best.unwrap()[code.len()]) {
                    Ordering::Greater => return None,
                    Ordering::Less => tight = false,
                    Ordering::Equal => {}
                }
            }
            code.push(v);
        }
        i += 1;
    }
    Some(code)
}

/// Code of the component containing `darts` (all darts of one component).
fn component_code(
    g: &EmbeddedGraph,
    darts: &[Dart],
    labels: &mut [u16],
    order: &mut Vec<Dart>,
) -> Vec<u16> {
    let mut best: Option<Vec<u16>> = None;
    for &s in darts {
        for forward in [true, false] {
            if let Some(c) = traverse(g, s, forward, labels, order, best.as_deref()) {
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
    }
    best.unwrap_or_default()
}

pub fn canonical_code(g: &EmbeddedGraph) -> Vec<u8> {
    let nd = g.dart_count();
    let mut comp = vec![usize::MAX; nd];
    let mut components: Vec<Vec<Dart>> = Vec::new();
    for s in 0..nd {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = components.len();
        let mut stack = vec![s];
        comp[s] = c;
        let mut members = Vec::new();
        while let Some(d) = stack.pop() {
            members.push(d);
            for nb in [g.succ(d), rev(d)] {
                if comp[nb] == usize::MAX {
                    comp[nb] = c;
                    stack.push(nb);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut labels = vec![u16::MAX; nd];
    let mut order = Vec::with_capacity(nd);
    let mut codes: Vec<Vec<u16>> = components
        .iter()
        .map(|m| component_code(g, m, &mut labels, &mut order))
        .collect();
    codes.sort();
    let mut words: Vec<u16> = vec![
        g.n() as u16,
        g.isolated_vertices().len() as u16,
        codes.len() as u16,
    ];
    for c in codes {
        words.push(c.len() as u16);
        words.extend(c);
    }
    words.iter().flat_map(|w| w.to_be_bytes()).collect()
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_relabel(g: &EmbeddedGraph, rng: &mut ChaCha8Rng) -> EmbeddedGraph {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(rng);
        let shift: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..6)).collect();
        g.relabel(&perm, &shift)
    }

    #[test]
    fn code_is_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = grid_torus(3);
        let c = canonical_code(&g);
        for _ in 0..100 {
            assert_eq!(canonical_code(&random_relabel(&g, &mut rng)), c);
        }
    }

    #[test]
    fn code_merges_mirror_images() {
        let g = grid_torus(3);
        assert_eq!(canonical_code(&g), canonical_code(&g.mirror()));
    }

    #[test]
    fn code_separates_planar_and_toroidal_rotations() {
        // K4 planar versus a toroidal rotation of K4.
        let planar = EmbeddedGraph::from_neighbor_lists(&[
            vec![1, 2, 3],
            vec![0, 3, 2],
            vec![0, 1, 3],
            vec![0, 2, 1],
        ])
        .unwrap();
        let other = EmbeddedGraph::from_neighbor_lists(&[
            vec![1, 2, 3],
            vec![0, 2, 3],
            vec![0, 1, 3],
            vec![0, 1, 2],
        ])
        .unwrap();
        assert_ne!(canonical_code(&planar), canonical_code(&other));
    }

    #[test]
    fn code_counts_isolated_vertices() {
        let a = planar_triangle();
        let b = EmbeddedGraph::from_neighbor_lists(&[vec![1, 2], vec![2, 0], vec![0, 1], vec![]])
            .unwrap();
        assert_ne!(canonical_code(&a), canonical_code(&b));
    }
}
