//! Marking of diverging states: states that can perform an infinite sequence of
//! τ-transitions, i.e. reach a τ-cycle through τ-transitions only.

use crate::lts::{Lts, StateIndex, StateSet, TAU};
use crate::scc::tarjan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceMarking {
    diverging: Vec<bool>,
}

impl DivergenceMarking {
    pub fn is_diverging(&self, state: StateIndex) -> bool {
        self.diverging[state]
    }

    /// True iff some member of `states` diverges.
    pub fn any(&self, states: &StateSet) -> bool {
        states.iter().any(|s| self.diverging[s])
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.diverging
    }
}

/// Computes the divergence marking from the SCCs of the τ-graph followed by a
/// backward closure over τ-edges. A τ self-loop counts as a cycle.
pub fn mark_divergent(lts: &Lts) -> DivergenceMarking {
    let n = lts.num_states();
    let components = tarjan(n, |s| lts.successors(s, TAU).collect::<Vec<_>>());

    let mut diverging = vec![false; n];
    // Reverse topological order: all τ-successors outside a component are
    // decided before the component itself.
    for component in &components {
        let cyclic = component.len() > 1 || lts.successors(component[0], TAU).any(|t| t == component[0]);
        let reaches = cyclic
            || component
                .iter()
                .any(|&s| lts.successors(s, TAU).any(|t| diverging[t]));
        if reaches {
            for &s in component {
                diverging[s] = true;
            }
        }
    }
    DivergenceMarking { diverging }
}
