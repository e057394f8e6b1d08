//! The legacy checks, kept for comparison and for reproducing their defects.
//!
//! Pairs enter the antichain only when popped, successors are pushed whenever
//! they are not covered by the antichain (even if already in `working`), the
//! refusal check runs for unstable implementation states too, and the
//! failures-divergences check tests implementation divergence before
//! specification divergence.

use crate::lts::{Lts, StateIndex, StateSet, TAU};

use super::instrument::InstrumentationLog;
use super::session::Session;
use super::{CheckError, ExplorationConfig, Relation, Verdict, WitnessKind};

pub(crate) fn run(
    spec: &Lts,
    impl_: &Lts,
    config: &ExplorationConfig,
    mut log: Option<&mut InstrumentationLog>,
) -> Result<Verdict, CheckError> {
    let relation = config.relation;
    // The legacy fdr check expands with the plain normal form.
    let mut session = Session::new(spec, impl_, config, false, log.is_some());
    session.push_initial()?;
    let mut iteration = 0u64;

    let result = loop {
        let Some(entry) = session.pop() else {
            break Ok(Verdict::holds(session.metrics));
        };
        iteration += 1;
        let impl_state = entry.impl_state as usize;
        session.antichain_insert_unchecked(entry.spec, impl_state);

        let skip_expansion = if relation == Relation::FailuresDivergences
            && session.impl_marking.is_diverging(impl_state)
        {
            if !session.norm.diverges(entry.spec) {
                break Ok(session.fail(WitnessKind::Divergence, &entry));
            }
            true
        } else {
            false
        };

        if !skip_expansion {
            if relation != Relation::Trace
                && !legacy_refusals_included(session.spec, session.impl_, impl_state, &session.norm.get(entry.spec).states)
            {
                break Ok(session.fail(WitnessKind::Refusal, &entry));
            }
            let mut witness = None;
            for &(action, target) in session.impl_.outgoing(impl_state) {
                let spec_next = if action == TAU {
                    entry.spec
                } else {
                    session.norm.successor(entry.spec, action).expect("plain normal form is total")
                };
                if session.norm.is_empty(spec_next) {
                    witness = Some(session.child(&entry, action, spec_next, target));
                    break;
                }
                if !session.member(spec_next, target) {
                    let child = session.child(&entry, action, spec_next, target);
                    if let Err(e) = session.push_entry(child) {
                        return finish(&session, log, Err(e));
                    }
                }
            }
            if let Some(w) = witness {
                break Ok(session.fail(WitnessKind::EmptySpec, &w));
            }
        }

        session.mark_done(&entry);
        if let Some(log) = log.as_deref_mut() {
            session.record_iteration(log, iteration);
        }
    };
    finish(&session, log, result)
}

fn finish(
    session: &Session<'_>,
    log: Option<&mut InstrumentationLog>,
    result: Result<Verdict, CheckError>,
) -> Result<Verdict, CheckError> {
    if let Some(log) = log {
        session.finish_log(log);
    }
    result
}

/// Refusal inclusion where a state refuses what any stable state τ-reachable
/// from it refuses. The τ-reachable stable states of `impl_state` are searched
/// depth-first on every call.
fn legacy_refusals_included(spec: &Lts, impl_: &Lts, impl_state: StateIndex, u: &StateSet) -> bool {
    let spec_stable: Vec<Vec<usize>> = u
        .iter()
        .filter(|&s| spec.is_stable(s))
        .map(|s| spec.enabled_visible(s).collect())
        .collect();

    let mut seen = vec![false; impl_.num_states()];
    let mut stack = vec![impl_state];
    seen[impl_state] = true;
    while let Some(t) = stack.pop() {
        if impl_.is_stable(t) {
            let enabled = impl_.enabled(t);
            let covered = spec_stable
                .iter()
                .any(|acts| acts.iter().all(|a| enabled.binary_search(a).is_ok()));
            if !covered {
                return false;
            }
        }
        for next in impl_.successors(t, TAU) {
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    true
}
