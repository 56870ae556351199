use super::*;
use crate::atlas::{known_entry, u7};
use crate::fixtures::{
    degenerate_seven, exact_reduction, g1, g2, reference_graphs, EdgeBounds, G1_BOUNDS, G2_BOUNDS,
};
use crate::system::{build_system, realised_hypothesis, ShiftHypothesis};
use crate::torus::{upper_bound_d, Configuration};

fn reference_region() -> SearchRegion {
    SearchRegion::new(0.4004, 0.43870).unwrap()
}

fn own_system(cg: &crate::atlas::ContactGraph) -> ConstraintSystem {
    build_system(
        &cg.graph,
        &realised_hypothesis(&cg.graph, &cg.vectors).unwrap(),
    )
    .unwrap()
}

fn within(b: &SolutionBox, table: &[EdgeBounds], slack: f64) -> bool {
    b.edges.iter().zip(table).all(|(e, t)| {
        e[0].lo() >= t.x.0 - slack
            && e[0].hi() <= t.x.1 + slack
            && e[1].lo() >= t.y.0 - slack
            && e[1].hi() <= t.y.1 + slack
    })
}

#[test]
fn first_reference_graph_reproduces_table() {
    let r = solve(
        &own_system(&g1()),
        &reference_region(),
        &SolveParams::default(),
    )
    .unwrap();
    assert_eq!(r.clusters.len(), 1);
    assert!(!r.budget_exhausted);
    let c = &r.clusters[0];
    assert!(within(c, &G1_BOUNDS, 1e-3));
    assert!(c.edges[0][0].lo() >= 0.346659 - 1e-3 && c.edges[0][0].hi() <= 0.34685 + 1e-3);
}

#[test]
fn second_reference_graph_reproduces_table() {
    let r = solve(
        &own_system(&g2()),
        &reference_region(),
        &SolveParams::default(),
    )
    .unwrap();
    assert_eq!(r.clusters.len(), 1);
    assert!(within(&r.clusters[0], &G2_BOUNDS, 1e-3));
}

#[test]
fn triangle_forced_to_length_two_is_empty() {
    let cg = degenerate_seven();
    let h = ShiftHypothesis {
        c1: vec![0, 4, 2],
        c2: vec![6, 10, 8],
        const1: [2, 0],
        const2: [0, 1],
    };
    let s = build_system(&cg.graph, &h).unwrap();
    assert!(!linear_rows_reachable(&s, 0.45));
    let r = solve(
        &s,
        &SearchRegion::new(0.3, 0.45).unwrap(),
        &SolveParams::default(),
    )
    .unwrap();
    assert!(r.is_empty());
}

#[test]
fn degenerate_graph_isolates_one_cluster() {
    let cg = degenerate_seven();
    let r = solve(
        &own_system(&cg),
        &SearchRegion::new(0.35, 0.38).unwrap(),
        &SolveParams::default(),
    )
    .unwrap();
    assert_eq!(r.clusters.len(), 1);
    let c = &r.clusters[0];
    assert!(c.contains_edges(&cg.vectors));
    assert!(c.d.contains(u7()));
    assert_eq!(c.status, BoxStatus::Possible);
}

fn around(sys: &dyn Feasibility, point: &[f64], r: f64) -> Vec<Interval> {
    let _ = sys;
    point
        .iter()
        .map(|&p| Interval::point(p).inflate(r))
        .collect()
}

#[test]
fn boxes_around_solutions_are_feasible_in_both_modes() {
    for g in reference_graphs() {
        let cg = exact_reduction(&g).unwrap();
        let s = own_system(&cg);
        let d = known_entry(6, 1).unwrap().d;
        let a = AngleSystem::new(&s, &linear_basis(&s, BasisMode::Angle).unwrap());
        let xs = XSystem::new(&s, &linear_basis(&s, BasisMode::X).unwrap());
        let pa = a.point_of(&cg.vectors, d);
        let mut px: Vec<f64> = xs.free_edges().iter().map(|&e| cg.vectors[e][0]).collect();
        px.push(d);
        for r in [1e-12, 1e-6, 1e-3] {
            assert!(!a.check(&around(&a, &pa, r)).is_empty());
            assert!(!xs.check(&around(&xs, &px, r)).is_empty());
        }
    }
}

#[test]
fn degenerate_point_box_is_feasible() {
    let cg = degenerate_seven();
    let s = own_system(&cg);
    let a = AngleSystem::new(&s, &linear_basis(&s, BasisMode::Angle).unwrap());
    let xs = XSystem::new(&s, &linear_basis(&s, BasisMode::X).unwrap());
    let pa = a.point_of(&cg.vectors, u7());
    let mut px: Vec<f64> = xs.free_edges().iter().map(|&e| cg.vectors[e][0]).collect();
    px.push(u7());
    assert!(!a.check(&around(&a, &pa, 1e-12)).is_empty());
    assert!(!xs.check(&around(&xs, &px, 1e-12)).is_empty());
}

#[test]
fn distances_above_density_bound_are_infeasible() {
    let cg = g1();
    let s = own_system(&cg);
    let lo = upper_bound_d(6) + 1e-3;
    let region = SearchRegion::new(lo, crate::system::shift_bound_d()).unwrap();
    for mode in [Mode::Angle, Mode::X] {
        let params = SolveParams {
            mode,
            ..Default::default()
        };
        let r = solve(&s, &region, &params).unwrap();
        assert!(r.is_empty(), "{mode}");
    }
}

#[test]
fn full_angle_box_is_open_and_narrow_box_is_feasible() {
    let cg = exact_reduction(&g2().graph).unwrap();
    let s = own_system(&cg);
    let a = AngleSystem::new(&s, &linear_basis(&s, BasisMode::Angle).unwrap());
    let full = a.initial_box(&reference_region());
    assert!(matches!(a.check(&full), Node::Open(_)));
    let p = a.point_of(&cg.vectors, known_entry(6, 1).unwrap().d);
    assert!(matches!(a.check(&around(&a, &p, 5e-7)), Node::Verified(_)));
}

#[test]
fn separation_prune_cases() {
    let near = |x: f64, y: f64| {
        [
            Interval::point(x).inflate(0.01),
            Interval::point(y).inflate(0.01),
        ]
    };
    assert!(separation_prune(
        &[near(0.5, 0.5), near(0.505, 0.5)],
        Interval::new(0.4, 0.45)
    ));
    let e = known_entry(6, 1).unwrap();
    let pts: Vec<[Interval; 2]> = e
        .config
        .coords()
        .iter()
        .map(|p| [Interval::point(p[0]), Interval::point(p[1])])
        .collect();
    assert!(!separation_prune(&pts, Interval::point(e.d - 1e-12)));
    let exact = [
        [Interval::point(0.0), Interval::point(0.0)],
        [Interval::point(0.25), Interval::point(0.0)],
    ];
    assert!(!separation_prune(&exact, Interval::point(0.25)));
}

#[test]
fn free_point_search_cases() {
    let b = known_entry(7, 1).unwrap();
    let free = b.free_vertex.unwrap();
    let six = b.config.without(free);
    let r = free_point_search(&six, u7(), 8);
    assert!(r.has_interior());
    let five = known_entry(5, 1).unwrap();
    assert!(free_point_search(&five.config, five.d, 8).is_empty());
    let square = Configuration::from_coords(&[[0.0, 0.0], [0.0, 0.5], [0.5, 0.0], [0.5, 0.5]]);
    assert!(free_point_search(&square, 0.5, 8).is_empty());
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let s = own_system(&degenerate_seven());
    let region = SearchRegion::new(0.35, 0.38).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| solve(&s, &region, &SolveParams::default()).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn finer_tolerance_stays_inside_coarse_boxes() {
    let cg = degenerate_seven();
    let s = own_system(&cg);
    let region = SearchRegion::new(0.35, 0.38).unwrap();
    let coarse = solve(&s, &region, &SolveParams::default()).unwrap();
    let fine = solve(
        &s,
        &region,
        &SolveParams {
            tol: 1e-4,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(!fine.is_empty());
    for f in &fine.boxes {
        let covered = coarse
            .boxes
            .iter()
            .any(|c| c.vars.iter().zip(&f.vars).all(|(a, b)| a.intersects(b)));
        assert!(covered);
    }
}

#[test]
fn node_budget_keeps_unexplored_boxes() {
    let params = SolveParams {
        budget_nodes: Some(64),
        ..Default::default()
    };
    let r = solve(&own_system(&g1()), &reference_region(), &params).unwrap();
    assert!(r.budget_exhausted);
    assert!(r.boxes.iter().all(|b| b.status == BoxStatus::Possible));
    assert!(!r.boxes.is_empty());
}
