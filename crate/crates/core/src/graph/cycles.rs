//! Short closed walks and the shortest homologically independent pair.

use super::homology::{det2, Homology};
use super::{Dart, EmbeddedGraph};
use crate::error::Result;

/// Two closed walks generating `H1`, with `c1` no longer than `c2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePair {
    pub c1: Vec<Dart>,
    pub c2: Vec<Dart>,
    pub class1: [i64; 2],
    pub class2: [i64; 2],
}

impl CyclePair {
    pub fn lengths(&self) -> (usize, usize) {
        (self.c1.len(), self.c2.len())
    }
}

/// All closed walks of length `1..=cap` that repeat no dart, each listed once
/// starting from its smallest dart.
pub fn closed_walks(g: &EmbeddedGraph, cap: usize) -> Vec<Vec<Dart>> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(cap);
    for s in 0..g.dart_count() {
        path.clear();
        path.push(s);
        extend(g, s, cap, &mut path, &mut out);
    }
    out
}

fn extend(g: &EmbeddedGraph, s: Dart, cap: usize, path: &mut Vec<Dart>, out: &mut Vec<Vec<Dart>>) {
    let v = g.head(*path.last().unwrap());
    if v == g.origin(s) {
        out.push(path.clone());
    }
    if path.len() == cap {
        return;
    }
    for &d in g.rotation(v) {
        if d > s && !path.contains(&d) {
            path.push(d);
            extend(g, s, cap, path, out);
            path.pop();
        }
    }
}

/// Shortest pair of closed walks whose classes form a unimodular matrix.
///
/// Pairs are ranked by the longer length, then the shorter length, then the
/// dart sequences lexicographically.
pub fn shortest_independent_cycles(g: &EmbeddedGraph) -> Result<CyclePair> {
    let h = Homology::new(g)?;
    let mut cap = 6;
    loop {
        let mut walks: Vec<(Vec<Dart>, [i64; 2])> = closed_walks(g, cap)
            .into_iter()
            .map(|w| {
                let c = h.class(g, &w).expect("enumerated walks are closed");
                (w, c)
            })
            .filter(|(_, c)| *c != [0, 0])
            .collect();
        walks.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let mut best: Option<(usize, usize)> = None;
        for j in 0..walks.len() {
            if let Some((_, bj)) = best {
                if walks[j].0.len() > walks[bj].0.len() {
                    break;
                }
            }
            for i in 0..j {
                if det2(walks[i].1, walks[j].1).abs() != 1 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => {
                        let key = |a: usize, b: usize| {
                            (walks[b].0.len(), walks[a].0.len(), &walks[a].0, &walks[b].0)
                        };
                        key(i, j) < key(bi, bj)
                    }
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        if let Some((i, j)) = best {
            return Ok(CyclePair {
                c1: walks[i].0.clone(),
                c2: walks[j].0.clone(),
                class1: walks[i].1,
                class2: walks[j].1,
            });
        }
        // A cellular toroidal map always has a generating pair among walks of
        // length at most the number of darts.
        cap += 2;
        assert!(cap <= g.dart_count() + 2, "no generating pair found");
    }
}
