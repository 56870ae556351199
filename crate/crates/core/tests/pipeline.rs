//! Whole-pipeline behaviour on known configurations.

use torus_packing::atlas::{contact_graph, known_entry, variant_count};
use torus_packing::fixtures::reference_graphs;
use torus_packing::pipeline::{format_report, run_graphs, Fate, PipelineParams};
use torus_packing::solver::SearchRegion;
use torus_packing::system::shift_bound_d;

/// Contact graph of an atlas entry (without its free disk) and all its
/// single-edge deletions.
fn injected(n: usize, variant: usize) -> Vec<torus_packing::graph::EmbeddedGraph> {
    let e = known_entry(n, variant).unwrap();
    let c = match e.free_vertex {
        Some(f) => e.config.without(f),
        None => e.config.clone(),
    };
    let cg = contact_graph(&c, e.d, 1e-9).unwrap();
    let mut out = vec![cg.graph.clone()];
    out.extend((0..cg.graph.edge_count()).map(|k| cg.graph.without_edge(k)));
    out
}

#[test]
fn own_contact_graphs_are_never_eliminated() {
    for n in 5..=8 {
        for v in 1..=variant_count(n) {
            let d = known_entry(n, v).unwrap().d;
            let mut params = PipelineParams::new(n)
                .unwrap()
                .with_budget(Some(200_000), None);
            params.region = SearchRegion::new(d - 1e-3, (d + 1e-3).min(shift_bound_d())).unwrap();
            let r = run_graphs(&injected(n, v), &params).unwrap();
            for g in &r.graphs {
                assert!(
                    !matches!(g.fate, Fate::Eliminated { .. }),
                    "N={n} variant {v} graph {}: {}",
                    g.index,
                    g.fate
                );
            }
        }
    }
}

#[test]
fn report_does_not_depend_on_worker_count() {
    let params = PipelineParams::new(6).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| format_report(&run_graphs(&reference_graphs(), &params).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}

#[test]
fn free_disk_graph_takes_the_free_path() {
    // Six constrained points of the seven-disk packing with a free disk.
    let e = known_entry(7, 1).unwrap();
    let g = injected(7, 1).remove(0);
    assert_eq!(g.n(), 6);
    let mut params = PipelineParams::new(7).unwrap();
    params.region = SearchRegion::new(e.d - 1e-3, e.d + 1e-3).unwrap();
    let r = run_graphs(&[g], &params).unwrap();
    assert!(r.graphs[0].free_vertex);
    assert!(
        matches!(r.graphs[0].fate, Fate::MatchedAtlas { variant: 1, .. }),
        "{}",
        r.graphs[0].fate
    );
}

#[test]
fn wrong_vertex_count_is_an_error() {
    let params = PipelineParams::new(8).unwrap();
    assert!(run_graphs(&reference_graphs(), &params).is_err());
}
