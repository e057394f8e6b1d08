//! Explicit labelled transition systems with a distinguished internal action.
//!
//! States are dense indices `0..num_states`. Action index [`TAU`] is always the
//! internal action; every other index is a visible action. Outgoing transitions
//! are kept in declaration order (this fixes the exploration order of the
//! refinement checks) and additionally sorted by action for successor lookups.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

pub type StateIndex = usize;
pub type ActionIndex = usize;

/// The action index of the internal action τ.
pub const TAU: ActionIndex = 0;

/// Default name of the internal action.
pub const DEFAULT_TAU: &str = "tau";

/// A canonical (sorted, duplicate-free) set of state indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct StateSet(Vec<u32>);

impl StateSet {
    pub fn empty() -> Self {
        StateSet(Vec::new())
    }

    pub fn singleton(state: StateIndex) -> Self {
        StateSet(vec![state as u32])
    }

    /// Takes an arbitrary vector and brings it into canonical form.
    fn from_unsorted(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        StateSet(members)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, state: StateIndex) -> bool {
        self.0.binary_search(&(state as u32)).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = StateIndex> + '_ {
        self.0.iter().map(|&s| s as StateIndex)
    }

    /// Merge-style subset test on the sorted representations.
    pub fn is_subset(&self, other: &StateSet) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut theirs = other.0.iter();
        'outer: for &mine in &self.0 {
            for &candidate in theirs.by_ref() {
                if candidate == mine {
                    continue 'outer;
                }
                if candidate > mine {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut members = Vec::with_capacity(self.0.len() + other.0.len());
        members.extend_from_slice(&self.0);
        members.extend_from_slice(&other.0);
        StateSet::from_unsorted(members)
    }
}

impl FromIterator<StateIndex> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateIndex>>(iter: I) -> Self {
        StateSet::from_unsorted(iter.into_iter().map(|s| s as u32).collect())
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite labelled transition system.
#[derive(Clone, PartialEq, Eq)]
pub struct Lts {
    initial: StateIndex,
    /// `labels[TAU]` holds the name that was used for the internal action.
    labels: Vec<String>,
    /// CSR offsets into `transitions` and `sorted`, one entry per state plus one.
    offsets: Vec<usize>,
    /// Outgoing transitions per state, in declaration order.
    transitions: Vec<(ActionIndex, StateIndex)>,
    /// The same transitions, sorted by (action, target) within each state.
    sorted: Vec<(ActionIndex, StateIndex)>,
}

impl Lts {
    pub fn num_states(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateIndex {
        self.initial
    }

    /// All labels; index [`TAU`] is the internal action.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, action: ActionIndex) -> &str {
        &self.labels[action]
    }

    pub fn tau_name(&self) -> &str {
        &self.labels[TAU]
    }

    pub fn num_actions(&self) -> usize {
        self.labels.len()
    }

    /// The visible alphabet Act, i.e. every action except τ.
    pub fn visible_actions(&self) -> std::ops::Range<ActionIndex> {
        1..self.labels.len()
    }

    pub fn action_index(&self, label: &str) -> Option<ActionIndex> {
        self.labels.iter().skip(1).position(|l| l == label).map(|i| i + 1)
    }

    /// Outgoing transitions of `state` in declaration order.
    pub fn outgoing(&self, state: StateIndex) -> &[(ActionIndex, StateIndex)] {
        &self.transitions[self.offsets[state]..self.offsets[state + 1]]
    }

    /// All transitions `(from, action, to)` grouped by source state.
    pub fn transitions(&self) -> impl Iterator<Item = (StateIndex, ActionIndex, StateIndex)> + '_ {
        (0..self.num_states())
            .flat_map(move |s| self.outgoing(s).iter().map(move |&(a, t)| (s, a, t)))
    }

    /// The `action`-successors of `state`, possibly with duplicates when the
    /// input declared the same transition twice.
    pub fn successors(
        &self,
        state: StateIndex,
        action: ActionIndex,
    ) -> impl Iterator<Item = StateIndex> + '_ {
        let range = &self.sorted[self.offsets[state]..self.offsets[state + 1]];
        let start = range.partition_point(|&(a, _)| a < action);
        range[start..]
            .iter()
            .take_while(move |&&(a, _)| a == action)
            .map(|&(_, t)| t)
    }

    /// Actions labelling an outgoing transition of `state`, τ included, in
    /// ascending order.
    pub fn enabled(&self, state: StateIndex) -> Vec<ActionIndex> {
        let mut actions: Vec<ActionIndex> =
            self.sorted[self.offsets[state]..self.offsets[state + 1]]
                .iter()
                .map(|&(a, _)| a)
                .collect();
        actions.dedup();
        actions
    }

    /// Visible actions enabled in `state`, ascending.
    pub fn enabled_visible(&self, state: StateIndex) -> impl Iterator<Item = ActionIndex> + '_ {
        let range = &self.sorted[self.offsets[state]..self.offsets[state + 1]];
        let start = range.partition_point(|&(a, _)| a == TAU);
        let mut last = None;
        range[start..].iter().filter_map(move |&(a, _)| {
            if last == Some(a) {
                None
            } else {
                last = Some(a);
                Some(a)
            }
        })
    }

    pub fn is_enabled(&self, state: StateIndex, action: ActionIndex) -> bool {
        self.successors(state, action).next().is_some()
    }

    pub fn is_stable(&self, state: StateIndex) -> bool {
        !self.is_enabled(state, TAU)
    }

    /// Least superset of `states` that is closed under τ-transitions.
    pub fn tau_closure(&self, states: &StateSet) -> StateSet {
        self.tau_closure_of(states.iter().collect())
    }

    fn tau_closure_of(&self, mut stack: Vec<StateIndex>) -> StateSet {
        let mut seen = vec![false; self.num_states()];
        let mut result = Vec::with_capacity(stack.len());
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            result.push(s as u32);
            for t in self.successors(s, TAU) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        StateSet::from_unsorted(result)
    }

    /// `{t | ∃s ∈ states : s ⇒a t}` for a visible action `a` and a τ-closed set
    /// `states`.
    pub fn weak_step(&self, states: &StateSet, action: ActionIndex) -> StateSet {
        debug_assert_ne!(action, TAU, "weak_step is defined for visible actions");
        let targets: Vec<StateIndex> = states
            .iter()
            .flat_map(|s| self.successors(s, action))
            .collect();
        if targets.is_empty() {
            return StateSet::empty();
        }
        self.tau_closure_of(dedup(targets))
    }

    /// Re-indexes the actions of this LTS onto `labels`, which must contain every
    /// visible label of `self` and use index [`TAU`] for the internal action.
    pub fn with_alphabet(&self, labels: &[String]) -> Lts {
        let lookup: HashMap<&str, ActionIndex> = labels
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let remap: Vec<ActionIndex> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if i == TAU {
                    TAU
                } else {
                    *lookup
                        .get(l.as_str())
                        .unwrap_or_else(|| panic!("label {l:?} missing from target alphabet"))
                }
            })
            .collect();

        let mut builder = LtsBuilder::new(self.num_states(), self.initial);
        builder.labels = labels.to_vec();
        builder.labels[TAU] = self.labels[TAU].clone();
        for (s, a, t) in self.transitions() {
            builder.add_transition(s, remap[a], t);
        }
        builder.build()
    }
}

impl fmt::Debug for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Lts {{ initial: {}, states: {}, transitions: {} }}",
            self.initial,
            self.num_states(),
            self.num_transitions()
        )?;
        for (s, a, t) in self.transitions() {
            writeln!(f, "  {s} --{}--> {t}", self.labels[a])?;
        }
        Ok(())
    }
}

fn dedup(mut states: Vec<StateIndex>) -> Vec<StateIndex> {
    states.sort_unstable();
    states.dedup();
    states
}

/// Brings two LTSs onto a shared alphabet: the union of their visible labels,
/// those of `first` in their original order followed by the new labels of
/// `second`.
pub fn align(first: &Lts, second: &Lts) -> (Lts, Lts) {
    let mut labels: Vec<String> = first.labels.clone();
    for label in second.labels.iter().skip(1) {
        if !labels.iter().skip(1).any(|l| l == label) {
            labels.push(label.clone());
        }
    }
    if labels == first.labels && labels[1..] == second.labels[1..] {
        return (first.clone(), second.clone());
    }
    (first.with_alphabet(&labels), second.with_alphabet(&labels))
}

/// Incremental construction of an [`Lts`].
#[derive(Debug, Clone)]
pub struct LtsBuilder {
    num_states: usize,
    initial: StateIndex,
    labels: Vec<String>,
    edges: Vec<(StateIndex, ActionIndex, StateIndex)>,
}

impl LtsBuilder {
    pub fn new(num_states: usize, initial: StateIndex) -> Self {
        assert!(initial < num_states, "initial state {initial} out of range");
        LtsBuilder {
            num_states,
            initial,
            labels: vec![DEFAULT_TAU.to_string()],
            edges: Vec::new(),
        }
    }

    /// A builder whose action table starts as a copy of `labels`
    /// (`labels[TAU]` is the τ name).
    pub fn with_labels(num_states: usize, initial: StateIndex, labels: &[String]) -> Self {
        assert!(!labels.is_empty(), "the label table must contain τ");
        let mut builder = LtsBuilder::new(num_states, initial);
        builder.labels = labels.to_vec();
        builder
    }

    pub fn set_tau_name(&mut self, name: &str) -> &mut Self {
        self.labels[TAU] = name.to_string();
        self
    }

    /// Returns the index of a visible label, registering it when new.
    pub fn action(&mut self, label: &str) -> ActionIndex {
        match self.labels.iter().skip(1).position(|l| l == label) {
            Some(i) => i + 1,
            None => {
                self.labels.push(label.to_string());
                self.labels.len() - 1
            }
        }
    }

    pub fn add_transition(&mut self, from: StateIndex, action: ActionIndex, to: StateIndex) -> &mut Self {
        assert!(from < self.num_states && to < self.num_states, "transition endpoint out of range");
        assert!(action < self.labels.len(), "unknown action index {action}");
        self.edges.push((from, action, to));
        self
    }

    /// Adds a transition by label; `None` denotes τ.
    pub fn add(&mut self, from: StateIndex, label: Option<&str>, to: StateIndex) -> &mut Self {
        let action = match label {
            None => TAU,
            Some(l) => self.action(l),
        };
        self.add_transition(from, action, to)
    }

    pub fn build(self) -> Lts {
        let mut offsets = vec![0usize; self.num_states + 1];
        for &(s, _, _) in &self.edges {
            offsets[s + 1] += 1;
        }
        for i in 0..self.num_states {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut transitions = vec![(0, 0); self.edges.len()];
        for &(s, a, t) in &self.edges {
            transitions[fill[s]] = (a, t);
            fill[s] += 1;
        }
        let mut sorted = transitions.clone();
        for s in 0..self.num_states {
            sorted[offsets[s]..offsets[s + 1]].sort_unstable();
        }
        Lts {
            initial: self.initial,
            labels: self.labels,
            offsets,
            transitions,
            sorted,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn subset_tests() {
        let a: StateSet = [1, 3].into_iter().collect();
        let b: StateSet = [0, 1, 2, 3].into_iter().collect();
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(StateSet::empty().is_subset(&a));
        assert!(a.is_subset(&a));
        let c: StateSet = [1, 4].into_iter().collect();
        assert!(!c.is_subset(&b));
    }

    #[test]
    fn canonical_form() {
        let a: StateSet = [3, 1, 3, 2].into_iter().collect();
        let b: StateSet = [1, 2, 3].into_iter().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn enabled_actions() {
        let s0 = fixtures::spec_s0();
        let req = s0.action_index("req").unwrap();
        assert_eq!(s0.enabled(0), vec![req]);

        let u0 = fixtures::impl_u0();
        let twenty = u0.action_index("20").unwrap();
        assert_eq!(u0.enabled(1), vec![TAU, twenty]);

        let isolated = LtsBuilder::new(1, 0).build();
        assert!(isolated.enabled(0).is_empty());
    }

    #[test]
    fn stability() {
        let u0 = fixtures::impl_u0();
        assert!(!u0.is_stable(1));
        assert!(u0.is_stable(0));
        let s0 = fixtures::spec_s0();
        // s0, s2, s3 and s5 are stable, s1 is not.
        assert!(s0.is_stable(0));
        assert!(!s0.is_stable(1));
        assert!(s0.is_stable(2) && s0.is_stable(3) && s0.is_stable(4));
        assert!(LtsBuilder::new(1, 0).build().is_stable(0));
    }

    #[test]
    fn closure_and_weak_steps() {
        let s0 = fixtures::spec_s0();
        // Index 4 is s5 in the fixture.
        let s1_closure: StateSet = [1, 2, 4].into_iter().collect();
        assert_eq!(s0.tau_closure(&StateSet::singleton(1)), s1_closure);
        assert_eq!(s0.tau_closure(&StateSet::empty()), StateSet::empty());

        let req = s0.action_index("req").unwrap();
        let ten = s0.action_index("10").unwrap();
        let twenty = s0.action_index("20").unwrap();
        assert_eq!(s0.weak_step(&StateSet::singleton(0), req), s1_closure);
        assert_eq!(s0.weak_step(&StateSet::singleton(0), ten), StateSet::empty());
        assert_eq!(s0.weak_step(&StateSet::empty(), req), StateSet::empty());
        assert_eq!(s0.weak_step(&s1_closure, twenty), StateSet::singleton(0));
        assert_eq!(s0.weak_step(&s1_closure, ten), StateSet::singleton(3));

        let u0 = fixtures::impl_u0();
        assert_eq!(u0.tau_closure(&StateSet::singleton(1)), StateSet::singleton(1));
    }

    #[test]
    fn align_unions_alphabets() {
        let mut a = LtsBuilder::new(2, 0);
        a.add(0, Some("x"), 1);
        let a = a.build();
        let mut b = LtsBuilder::new(2, 0);
        b.add(0, Some("y"), 1).add(1, Some("x"), 0);
        let b = b.build();
        let (a2, b2) = align(&a, &b);
        assert_eq!(a2.labels(), b2.labels());
        assert_eq!(a2.labels()[1..], ["x".to_string(), "y".to_string()]);
        let x = a2.action_index("x").unwrap();
        assert_eq!(b2.successors(1, x).collect::<Vec<_>>(), vec![0]);
        assert_eq!(a2.successors(0, x).collect::<Vec<_>>(), vec![1]);
    }
}
