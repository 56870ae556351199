//! Randomized invariant checks shared by the property and acceptance
//! targets. Each check runs a fixed number of cases from a fixed seed and
//! returns the first counterexample.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_packing::atlas::{known_entry, variant_count, Status};
use torus_packing::certify::{contact_rates, inverse_norm_bound, kkt_check};
use torus_packing::enumerate::{enumerate_candidates, EnumerationSpec};
use torus_packing::fixtures::{degenerate_seven, exact_reduction, reference_graphs};
use torus_packing::graph::{candidate_filter, euler_characteristic, trace_faces};
use torus_packing::interval::Interval;
use torus_packing::solver::{AngleSystem, Feasibility, Node, XSystem};
use torus_packing::system::{
    build_system, hypothesis_orbits, linear_basis, realised_hypothesis, shift_bound_d, shift_pairs,
    to_coordinate_form, BasisMode,
};
use torus_packing::torus::{
    apply_isometry, min_pairwise_distance, Configuration, PointGroupElement, TorusIsometry,
};

pub type Check = Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&s, f).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// Interval enclosure against exact rational evaluation.

#[derive(Clone, Debug)]
pub enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqr(Box<Expr>),
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = (-1000i64..1000, 1i64..1000).prop_map(|(p, q)| Expr::Leaf(p, q));
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Expr::Sqr(Box::new(a))),
        ]
    })
}

/// Exact value and interval value; `None` when a divisor may vanish.
fn eval(e: &Expr) -> Option<(BigRational, Interval)> {
    Some(match e {
        Expr::Leaf(p, q) => (
            BigRational::new(BigInt::from(*p), BigInt::from(*q)),
            Interval::point(*p as f64) / Interval::point(*q as f64),
        ),
        Expr::Add(a, b) => {
            let (x, i) = eval(a)?;
            let (y, j) = eval(b)?;
            (x + y, i + j)
        }
        Expr::Sub(a, b) => {
            let (x, i) = eval(a)?;
            let (y, j) = eval(b)?;
            (x - y, i - j)
        }
        Expr::Mul(a, b) => {
            let (x, i) = eval(a)?;
            let (y, j) = eval(b)?;
            (x * y, i * j)
        }
        Expr::Div(a, b) => {
            let (x, i) = eval(a)?;
            let (y, j) = eval(b)?;
            if y.is_zero() || j.contains(0.0) {
                return None;
            }
            (x / y, i / j)
        }
        Expr::Sqr(a) => {
            let (x, i) = eval(a)?;
            (&x * &x, i.sqr())
        }
    })
}

fn rational_in(x: &BigRational, i: Interval) -> bool {
    let lo =
        i.lo() == f64::NEG_INFINITY || BigRational::from_float(i.lo()).is_some_and(|lo| lo <= *x);
    let hi = i.hi() == f64::INFINITY || BigRational::from_float(i.hi()).is_some_and(|hi| *x <= hi);
    lo && hi
}

pub fn interval_enclosure(cases: u32) -> Check {
    run(cases, expr(), |e| {
        if let Some((x, i)) = eval(&e) {
            prop_assert!(rational_in(&x, i), "{x} not in {i}");
        }
        Ok(())
    })
}

// Isometry invariance of the minimum distance.

pub fn isometry_invariance(cases: u32, tol: f64) -> Check {
    let config = prop::collection::vec((0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y)| [x, y]), 2..10);
    run(
        cases,
        (config, 0usize..8, (-3.0f64..3.0, -3.0f64..3.0)),
        |(pts, g, t)| {
            let c = Configuration::from_coords(&pts);
            let iso = TorusIsometry::new(PointGroupElement::all()[g], [t.0, t.1]);
            let a = min_pairwise_distance(&c).unwrap();
            let b = min_pairwise_distance(&apply_isometry(&c, &iso)).unwrap();
            prop_assert!((a - b).abs() < tol, "{a} vs {b}");
            Ok(())
        },
    )
}

// Face structure of every enumerated candidate.

pub fn enumerated_faces(ns: &[usize]) -> Check {
    for &n in ns {
        for (k, g) in enumerate_candidates(&EnumerationSpec::new(n))
            .unwrap()
            .iter()
            .enumerate()
        {
            let faces = trace_faces(g);
            let mut seen = vec![0usize; g.dart_count()];
            for f in &faces.faces {
                for &d in f {
                    seen[d] += 1;
                }
            }
            let ok = seen.iter().all(|&c| c == 1)
                && euler_characteristic(g) == 0
                && g.n() as i64 - g.edge_count() as i64 + faces.count() as i64 == 0
                && faces.lengths().iter().sum::<usize>() == 2 * g.edge_count()
                && candidate_filter(g, n);
            ensure(ok, || format!("N={n} map {k}"))?;
        }
    }
    Ok(())
}

// Shift-pair tables for short cycles.

pub fn shift_tables() -> Check {
    let d = shift_bound_d();
    let p33 = shift_pairs(3, 3, d).map_err(|e| e.to_string())?;
    let p34 = shift_pairs(3, 4, d).map_err(|e| e.to_string())?;
    let p44 = shift_pairs(4, 4, d).map_err(|e| e.to_string())?;
    ensure(p33 == vec![([1, 0], [0, 1])], || format!("(3,3): {p33:?}"))?;
    ensure(
        p34 == vec![([1, 0], [0, 1]), ([1, 0], [1, 1]), ([1, 0], [-1, 1])],
        || format!("(3,4): {p34:?}"),
    )?;
    ensure(
        p44 == vec![
            ([1, 0], [0, 1]),
            ([1, 0], [1, 1]),
            ([1, 0], [-1, 1]),
            ([1, -1], [1, 1]),
        ],
        || format!("(4,4): {p44:?}"),
    )?;
    // Every orbit representative is unimodular.
    for (a, b) in [(3, 3), (3, 4), (4, 4)] {
        for (p, q) in hypothesis_orbits(a, b, d).map_err(|e| e.to_string())? {
            ensure((p[0] * q[1] - p[1] * q[0]).abs() == 1, || {
                format!("({a},{b}) orbit {p:?} {q:?}")
            })?;
        }
    }
    Ok(())
}

// Procedure agreement between the two parametrizations.

pub struct Fixture {
    pub angle: AngleSystem,
    pub x: XSystem,
    pub point: Vec<f64>,
}

pub fn fixtures() -> Vec<Fixture> {
    let mut cgs: Vec<_> = reference_graphs()
        .iter()
        .map(|g| exact_reduction(g).unwrap())
        .collect();
    cgs.push(degenerate_seven());
    cgs.iter()
        .map(|cg| {
            let s = build_system(
                &cg.graph,
                &realised_hypothesis(&cg.graph, &cg.vectors).unwrap(),
            )
            .unwrap();
            let d = cg.vectors[0][0].hypot(cg.vectors[0][1]);
            let angle = AngleSystem::new(&s, &linear_basis(&s, BasisMode::Angle).unwrap());
            let point = angle.point_of(&cg.vectors, d);
            Fixture {
                x: XSystem::new(&s, &linear_basis(&s, BasisMode::X).unwrap()),
                angle,
                point,
            }
        })
        .collect()
}

/// A box the angle procedure proves to hold a solution projects onto a box
/// the x procedure cannot discard, and vice versa.
pub fn procedure_agreement(cases: u32) -> Check {
    let fx = fixtures();
    let s = (
        0..fx.len(),
        -9.0f64..-0.5,
        prop::collection::vec(-1.0f64..1.0, 8),
    );
    run(cases, s, |(k, log_r, seed)| {
        let fx = &fx[k];
        let r = 10f64.powf(log_r);
        let a: Vec<Interval> = fx
            .point
            .iter()
            .enumerate()
            .map(|(i, &p)| Interval::point(p + 0.5 * r * seed[i % seed.len()]).inflate(r))
            .collect();
        let av = fx.angle.check(&a);
        let (edges, _) = fx.angle.enclose(&a);
        let mut xb: Vec<Interval> = fx.x.free_edges().iter().map(|&e| edges[e][0]).collect();
        xb.push(a[a.len() - 1]);
        let xv = fx.x.check(&xb);
        prop_assert!(!(matches!(av, Node::Verified(_)) && xv.is_empty()));
        prop_assert!(!(matches!(xv, Node::Verified(_)) && av.is_empty()));
        Ok(())
    })
}

/// Counts of verified and empty verdicts over boxes around the fixture
/// solutions, unshifted and shifted off the solution.
pub fn agreement_verdicts() -> (usize, usize) {
    let mut verified = 0;
    let mut empty = 0;
    for fx in fixtures() {
        for (i, log_r) in [-9.0, -7.0, -5.0, -3.0, -1.0].into_iter().enumerate() {
            let r = 10f64.powf(log_r);
            for shift in [0.0, 3.0] {
                let a: Vec<Interval> = fx
                    .point
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| {
                        Interval::point(p + if k == i { shift * r } else { 0.0 }).inflate(r)
                    })
                    .collect();
                match fx.angle.check(&a) {
                    Node::Verified(_) => verified += 1,
                    Node::Empty => empty += 1,
                    Node::Open(_) => {}
                }
            }
        }
    }
    (verified, empty)
}

// Second differential of the coordinate system.

pub fn second_differential(samples: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in reference_graphs() {
        let cg = exact_reduction(&g).unwrap();
        let s = build_system(
            &cg.graph,
            &realised_hypothesis(&cg.graph, &cg.vectors).unwrap(),
        )
        .unwrap();
        let cs = to_coordinate_form(&s, &cg.vectors).unwrap();
        let zero = vec![[0.0, 0.0]; cs.n];
        let f0 = cs.residuals(&zero, 0.0);
        let j = cs.jacobian(&zero);
        for _ in 0..samples {
            let v: Vec<[f64; 2]> = (0..cs.n)
                .map(|_| [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)])
                .collect();
            // F is quadratic in the positions and linear in d2, so the second
            // differential is F(v) - F(0) - dF(0) v.
            let fv = cs.residuals(&v, 0.0);
            let flat: Vec<f64> = v.iter().flat_map(|p| [p[0], p[1]]).chain([0.0]).collect();
            for (row, (a, b)) in j.iter().zip(fv.iter().zip(&f0)) {
                let lin: f64 = row.iter().zip(&flat).map(|(x, y)| x * y).sum();
                let q = a - b - lin;
                ensure(q.abs() <= 4.0 + 1e-12, || format!("{q}"))?;
            }
        }
    }
    Ok(())
}

// Inverse norm bound against exact rational inversion.

fn exact_inverse_norm(m: &[Vec<i64>]) -> Option<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        let pr = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.iter()
        .map(|r| r[n..].iter().fold(BigRational::zero(), |s, x| s + x.abs()))
        .max()
}

pub fn inverse_bound(cases: u32) -> Check {
    let m = prop::collection::vec(prop::collection::vec(-9i64..10, 5), 5);
    run(cases, m, |m| {
        let Some(exact) = exact_inverse_norm(&m) else {
            return Ok(());
        };
        let f: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        if let Ok(bound) = inverse_norm_bound(&f) {
            prop_assert!(BigRational::from_float(bound).unwrap() >= exact);
        }
        Ok(())
    })
}

// Stationary configurations admit no motion that lengthens every contact.

pub fn kkt_no_improving_direction(directions: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=9 {
        for v in 1..=variant_count(n) {
            let e = known_entry(n, v).unwrap();
            if e.status != Status::Proven && n != 9 {
                continue;
            }
            let r = kkt_check(&e.config, e.d);
            ensure(r.verdict.is_satisfied(), || {
                format!("N={n} variant {v} not stationary")
            })?;
            for _ in 0..directions {
                let mut m: Vec<[f64; 2]> = (0..n)
                    .map(|_| [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)])
                    .collect();
                let scale = m
                    .iter()
                    .flat_map(|p| [p[0].abs(), p[1].abs()])
                    .fold(0.0, f64::max);
                for p in m.iter_mut() {
                    *p = [p[0] / scale, p[1] / scale];
                }
                let worst = contact_rates(&r.contacts, &m)
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                ensure(worst <= 1e-10, || {
                    format!("N={n} variant {v}: every contact grows")
                })?;
            }
        }
    }
    Ok(())
}
