//! Verdicts, witnesses and counterexamples on the bundled fixtures.

use refinekit::engine::{refines_legacy, refusals_included, ExplorationConfig, Relation, Strategy, WitnessKind};
use refinekit::fixtures;
use refinekit::oracle::{oracle_refines, shortest_visible_witness_length, shortest_witness_distance, WitnessDistance};
use refinekit::{align, refines, StateSet};

const STRATEGIES: [Strategy; 2] = [Strategy::DepthFirst, Strategy::BreadthFirst];

fn set(states: &[usize]) -> StateSet {
    states.iter().copied().collect()
}

#[test]
fn cash_machine_matrix_agrees_with_oracle() {
    let systems = [
        ("s0", fixtures::spec_s0()),
        ("t0", fixtures::impl_t0()),
        ("u0", fixtures::impl_u0()),
    ];
    for (spec_name, spec) in &systems {
        for (impl_name, impl_) in &systems {
            for relation in Relation::ALL {
                let expected = oracle_refines(spec, impl_, relation).unwrap();
                for strategy in STRATEGIES {
                    let v = refines(spec, impl_, &ExplorationConfig::improved(relation, strategy)).unwrap();
                    assert_eq!(v.refines, expected, "{spec_name} {relation} {impl_name} {strategy:?}");
                }
            }
        }
    }
}

#[test]
fn stable_failures_counterexample_is_req_20() {
    for strategy in STRATEGIES {
        let v = refines(
            &fixtures::spec_s0(),
            &fixtures::impl_t0(),
            &ExplorationConfig::improved(Relation::StableFailures, strategy),
        )
        .unwrap();
        assert!(!v.refines);
        assert_eq!(v.witness_kind, Some(WitnessKind::Refusal));
        assert_eq!(v.counterexample.unwrap(), ["req", "20"]);
        let witness = v.witness.unwrap();
        assert_eq!(witness.spec, [0]);
        assert_eq!(witness.impl_state, 2);
    }
}

#[test]
fn divergence_witness_for_polling_loop() {
    let v = refines(
        &fixtures::spec_s0(),
        &fixtures::impl_u0(),
        &ExplorationConfig::improved(Relation::FailuresDivergences, Strategy::BreadthFirst),
    )
    .unwrap();
    assert!(!v.refines);
    assert_eq!(v.witness_kind, Some(WitnessKind::Divergence));
    assert_eq!(v.counterexample.unwrap(), ["req"]);
    assert_eq!(v.witness.unwrap().impl_state, 1);
}

#[test]
fn trace_witness_reports_empty_spec() {
    let v = refines(
        &fixtures::impl_u0(),
        &fixtures::spec_s0(),
        &ExplorationConfig::improved(Relation::Trace, Strategy::BreadthFirst),
    )
    .unwrap();
    assert!(!v.refines);
    assert_eq!(v.witness_kind, Some(WitnessKind::EmptySpec));
    assert_eq!(v.counterexample.unwrap(), ["req", "10"]);
    assert!(v.witness.unwrap().spec.is_empty());
}

#[test]
fn witness_distance_counts_internal_steps() {
    let (u0, s0) = (fixtures::impl_u0(), fixtures::spec_s0());
    // req, τ, 10: the τ into s2 is a product step of its own.
    assert_eq!(shortest_witness_distance(&u0, &s0, Relation::Trace).unwrap(), WitnessDistance::Finite(3));
    assert_eq!(shortest_visible_witness_length(&u0, &s0, Relation::Trace).unwrap(), WitnessDistance::Finite(2));
    let v = refines(&u0, &s0, &ExplorationConfig::improved(Relation::Trace, Strategy::BreadthFirst)).unwrap();
    assert_eq!(v.witness_depth, Some(3));
    assert_eq!(
        shortest_witness_distance(&s0, &fixtures::impl_t0(), Relation::Trace).unwrap(),
        WitnessDistance::Infinite
    );
}

#[test]
fn refusal_inclusion_on_cash_machine() {
    let (s0, t0) = align(&fixtures::spec_s0(), &fixtures::impl_t0());
    // t1 offers 20 and s5 offers only 20.
    assert!(refusals_included(&s0, &t0, 1, &set(&[1, 2, 4])));
    // t2 deadlocks where the specification still offers req.
    assert!(!refusals_included(&s0, &t0, 2, &set(&[0])));
    // t0 offers req like s0.
    assert!(refusals_included(&s0, &t0, 0, &set(&[0])));
    // Unstable members alone never cover a refusal.
    assert!(!refusals_included(&s0, &t0, 1, &set(&[1])));
}

#[test]
fn legacy_agrees_on_trace_and_stable_failures() {
    let (s0, t0) = align(&fixtures::spec_s0(), &fixtures::impl_t0());
    for strategy in STRATEGIES {
        let trace = refines_legacy(&s0, &t0, &ExplorationConfig::legacy(Relation::Trace, strategy)).unwrap();
        assert!(trace.refines);
        let sf = refines_legacy(&s0, &t0, &ExplorationConfig::legacy(Relation::StableFailures, strategy)).unwrap();
        assert!(!sf.refines);
    }
}

#[test]
fn legacy_fdr_misses_diverging_specification() {
    let fdr = Relation::FailuresDivergences;
    let (s0, s1) = (fixtures::incorrect_s0(), fixtures::incorrect_s1());
    assert!(oracle_refines(&s0, &s1, fdr).unwrap());
    for strategy in STRATEGIES {
        assert!(refines(&s0, &s1, &ExplorationConfig::improved(fdr, strategy)).unwrap().refines);
        assert!(!refines(&s0, &s1, &ExplorationConfig::legacy(fdr, strategy)).unwrap().refines);
    }
    let (s2, s3) = (fixtures::incorrect_s2(), fixtures::incorrect_s3());
    assert!(oracle_refines(&s2, &s3, fdr).unwrap());
    assert!(refines(&s2, &s3, &ExplorationConfig::legacy(fdr, Strategy::DepthFirst)).unwrap().refines);
}
