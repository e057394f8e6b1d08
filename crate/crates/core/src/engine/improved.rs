//! The improved trace, stable-failures and failures-divergences checks.
//!
//! Invariant: every pair in `working` or already popped is covered by the
//! antichain, and no pair is ever scheduled twice.

use crate::lts::{Lts, TAU};

use super::instrument::InstrumentationLog;
use super::refusals_included;
use super::session::{Entry, Session};
use super::{CheckError, ExplorationConfig, Relation, Strategy, Verdict, WitnessKind};

pub(crate) fn run(
    spec: &Lts,
    impl_: &Lts,
    config: &ExplorationConfig,
    mut log: Option<&mut InstrumentationLog>,
) -> Result<Verdict, CheckError> {
    let fdr = config.relation == Relation::FailuresDivergences;
    let mut session = Session::new(spec, impl_, config, fdr, log.is_some());
    let initial = session.push_initial()?;
    session.antichain_insert(initial.spec, initial.impl_state as usize);

    let result = explore(&mut session, config, log.as_deref_mut());
    if let Some(log) = log {
        session.finish_log(log);
    }
    result
}

fn explore(
    session: &mut Session<'_>,
    config: &ExplorationConfig,
    mut log: Option<&mut InstrumentationLog>,
) -> Result<Verdict, CheckError> {
    let relation = config.relation;
    let breadth_first = config.strategy == Strategy::BreadthFirst;
    // Breadth-first only: an empty-spec witness found one level below the
    // current front. Pairs still queued at the current level are checked for
    // pop-time witnesses first, since those would be strictly shallower.
    let mut pending: Option<Entry> = None;
    let mut iteration = 0u64;

    while let Some(entry) = session.pop() {
        iteration += 1;
        if let Some(p) = pending {
            if entry.depth >= p.depth {
                break;
            }
        }
        let impl_state = entry.impl_state as usize;

        if relation == Relation::FailuresDivergences && session.norm.diverges(entry.spec) {
            // A diverging specification allows everything from here on.
            session.mark_done(&entry);
            if let Some(log) = log.as_deref_mut() {
                session.record_iteration(log, iteration);
            }
            continue;
        }
        if relation == Relation::FailuresDivergences && session.impl_marking.is_diverging(impl_state) {
            return Ok(session.fail(WitnessKind::Divergence, &entry));
        }
        if relation != Relation::Trace
            && session.impl_.is_stable(impl_state)
            && !refusals_included(
                session.spec,
                session.impl_,
                impl_state,
                &session.norm.get(entry.spec).states,
            )
        {
            return Ok(session.fail(WitnessKind::Refusal, &entry));
        }

        if pending.is_none() {
            for &(action, target) in session.impl_.outgoing(impl_state) {
                let spec_next = if action == TAU {
                    entry.spec
                } else {
                    session
                        .norm
                        .successor(entry.spec, action)
                        .expect("non-diverging normal-form states are never blocked")
                };
                if session.norm.is_empty(spec_next) {
                    let witness = session.child(&entry, action, spec_next, target);
                    if !breadth_first {
                        return Ok(session.fail(WitnessKind::EmptySpec, &witness));
                    }
                    pending = Some(witness);
                    break;
                }
                if !session.member(spec_next, target) {
                    session.antichain_insert(spec_next, target);
                    let child = session.child(&entry, action, spec_next, target);
                    session.push_entry(child)?;
                }
            }
        }

        session.mark_done(&entry);
        if let Some(log) = log.as_deref_mut() {
            session.record_iteration(log, iteration);
        }
    }

    Ok(match pending {
        Some(witness) => session.fail(WitnessKind::EmptySpec, &witness),
        None => Verdict::holds(session.metrics),
    })
}
