//! Randomized invariants of the arithmetic, geometry, solver and
//! certificate layers.

mod common;

#[test]
fn interval_evaluation_encloses_exact_value() {
    common::interval_enclosure(10_000).unwrap();
}

#[test]
fn min_distance_is_isometry_invariant() {
    common::isometry_invariance(1000, 1e-12).unwrap();
}

#[test]
fn enumerated_maps_have_consistent_faces() {
    common::enumerated_faces(&[5, 6]).unwrap();
}

#[test]
fn short_cycle_shift_tables() {
    common::shift_tables().unwrap();
}

#[test]
fn procedures_never_contradict() {
    common::procedure_agreement(1000).unwrap();
}

#[test]
fn agreement_boxes_reach_both_verdicts() {
    let (verified, empty) = common::agreement_verdicts();
    assert!(
        verified > 0 && empty > 0,
        "verified {verified}, empty {empty}"
    );
}

#[test]
fn second_differential_is_bounded_by_four() {
    common::second_differential(25_000).unwrap();
}

#[test]
fn inverse_norm_bound_is_an_upper_bound() {
    common::inverse_bound(1000).unwrap();
}

#[test]
fn satisfied_kkt_admits_no_improving_direction() {
    common::kkt_no_improving_direction(1000).unwrap();
}
