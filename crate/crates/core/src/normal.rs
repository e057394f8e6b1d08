//! On-the-fly subset construction of the normal forms `norm(L)` and
//! `norm_fdr(L)` of a specification.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::divergence::{mark_divergent, DivergenceMarking};
use crate::lts::{ActionIndex, Lts, StateSet};

/// A node of the normal form: a τ-closed set of specification states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormState {
    pub states: StateSet,
    /// Some member diverges.
    pub diverges: bool,
}

impl NormState {
    fn new(states: StateSet, marking: &DivergenceMarking) -> Self {
        let diverges = marking.any(&states);
        NormState { states, diverges }
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

pub fn norm_initial(lts: &Lts, marking: &DivergenceMarking) -> NormState {
    NormState::new(
        lts.tau_closure(&StateSet::singleton(lts.initial())),
        marking,
    )
}

pub fn norm_successor(lts: &Lts, marking: &DivergenceMarking, u: &NormState, a: ActionIndex) -> NormState {
    NormState::new(lts.weak_step(&u.states, a), marking)
}

/// `None` when `u` diverges: the fdr normal form has no outgoing transitions
/// there.
pub fn normfdr_successor(
    lts: &Lts,
    marking: &DivergenceMarking,
    u: &NormState,
    a: ActionIndex,
) -> Option<NormState> {
    if u.diverges {
        None
    } else {
        Some(norm_successor(lts, marking, u, a))
    }
}

/// Handle of an interned [`NormState`] within one [`Normaliser`].
pub type NormId = u32;

/// A normalisation session: interns every discovered normal-form state and
/// memoises successors per (state, action). The memo lives as long as the
/// session, i.e. one refinement check.
pub struct Normaliser<'a> {
    lts: &'a Lts,
    marking: DivergenceMarking,
    fdr: bool,
    states: Vec<NormState>,
    index: HashMap<StateSet, NormId>,
    memo: HashMap<(NormId, ActionIndex), Option<NormId>>,
}

impl<'a> Normaliser<'a> {
    /// `fdr` selects `norm_fdr`, whose diverging states are blocked.
    pub fn new(lts: &'a Lts, fdr: bool) -> Self {
        Normaliser {
            lts,
            marking: mark_divergent(lts),
            fdr,
            states: Vec::new(),
            index: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn lts(&self) -> &'a Lts {
        self.lts
    }

    pub fn marking(&self) -> &DivergenceMarking {
        &self.marking
    }

    pub fn initial(&mut self) -> NormId {
        let initial = norm_initial(self.lts, &self.marking);
        self.intern(initial)
    }

    pub fn intern(&mut self, state: NormState) -> NormId {
        if let Some(&id) = self.index.get(&state.states) {
            return id;
        }
        let id = self.states.len() as NormId;
        self.index.insert(state.states.clone(), id);
        self.states.push(state);
        id
    }

    pub fn get(&self, id: NormId) -> &NormState {
        &self.states[id as usize]
    }

    pub fn diverges(&self, id: NormId) -> bool {
        self.states[id as usize].diverges
    }

    pub fn is_empty(&self, id: NormId) -> bool {
        self.states[id as usize].is_empty()
    }

    /// The `a`-successor of `id` for a visible action `a`; `None` only in fdr
    /// mode on diverging states.
    pub fn successor(&mut self, id: NormId, a: ActionIndex) -> Option<NormId> {
        if let Some(&cached) = self.memo.get(&(id, a)) {
            return cached;
        }
        let current = &self.states[id as usize];
        let next = if self.fdr {
            normfdr_successor(self.lts, &self.marking, current, a)
        } else {
            Some(norm_successor(self.lts, &self.marking, current, a))
        };
        let result = next.map(|n| self.intern(n));
        self.memo.insert((id, a), result);
        result
    }

    /// Number of distinct normal-form states discovered so far.
    pub fn num_discovered(&self) -> usize {
        self.states.len()
    }

    /// Renders the discovered fragment of the normal form, one line per
    /// memoised edge.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for (id, state) in self.states.iter().enumerate() {
            let _ = writeln!(
                out,
                "N{id} = {:?}{}",
                state.states,
                if state.diverges { " (diverges)" } else { "" }
            );
        }
        let mut edges: Vec<_> = self.memo.iter().collect();
        edges.sort();
        for (&(from, a), to) in edges {
            match to {
                Some(to) => {
                    let _ = writeln!(out, "N{from} --{}--> N{to}", self.lts.label(a));
                }
                None => {
                    let _ = writeln!(out, "N{from} --{}--> blocked", self.lts.label(a));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lts::LtsBuilder;

    fn set(states: &[usize]) -> StateSet {
        states.iter().copied().collect()
    }

    #[test]
    fn initial_states() {
        let s0 = fixtures::spec_s0();
        let m = mark_divergent(&s0);
        assert_eq!(
            norm_initial(&s0, &m),
            NormState {
                states: set(&[0]),
                diverges: false
            }
        );

        let u0 = fixtures::impl_u0();
        let m = mark_divergent(&u0);
        assert_eq!(norm_initial(&u0, &m).states, set(&[0]));
        assert!(!norm_initial(&u0, &m).diverges);

        let mut b = LtsBuilder::new(1, 0);
        b.add(0, None, 0);
        let looping = b.build();
        let m = mark_divergent(&looping);
        assert!(norm_initial(&looping, &m).diverges);
    }

    #[test]
    fn successors() {
        let s0 = fixtures::spec_s0();
        let m = mark_divergent(&s0);
        let twenty = s0.action_index("20").unwrap();
        let ten = s0.action_index("10").unwrap();
        let u = NormState::new(set(&[1, 2, 4]), &m);
        assert_eq!(norm_successor(&s0, &m, &u, twenty).states, set(&[0]));
        let start = norm_initial(&s0, &m);
        assert!(norm_successor(&s0, &m, &start, ten).is_empty());
        let empty = NormState::new(StateSet::empty(), &m);
        for a in s0.visible_actions() {
            assert!(norm_successor(&s0, &m, &empty, a).is_empty());
            assert!(normfdr_successor(&s0, &m, &empty, a).unwrap().is_empty());
        }
    }

    #[test]
    fn fdr_blocks_diverging_states() {
        let u0 = fixtures::impl_u0();
        let m = mark_divergent(&u0);
        let req = u0.action_index("req").unwrap();
        let twenty = u0.action_index("20").unwrap();
        let start = norm_initial(&u0, &m);
        let after_req = normfdr_successor(&u0, &m, &start, req).unwrap();
        assert_eq!(after_req.states, set(&[1]));
        assert!(after_req.diverges);
        assert_eq!(normfdr_successor(&u0, &m, &after_req, twenty), None);
        assert_eq!(norm_successor(&u0, &m, &after_req, twenty).states, set(&[0, 2]));
    }

    #[test]
    fn session_interns_and_memoises() {
        let s0 = fixtures::spec_s0();
        let mut n = Normaliser::new(&s0, false);
        let req = s0.action_index("req").unwrap();
        let twenty = s0.action_index("20").unwrap();
        let init = n.initial();
        let a = n.successor(init, req).unwrap();
        assert_eq!(n.get(a).states, set(&[1, 2, 4]));
        let back = n.successor(a, twenty).unwrap();
        assert_eq!(back, init);
        assert_eq!(n.successor(init, req), Some(a));
        assert_eq!(n.num_discovered(), 2);
        let dump = n.debug_dump();
        assert!(dump.contains("N0 --req--> N1"));
        assert!(dump.contains("N1 --20--> N0"));
    }
}
