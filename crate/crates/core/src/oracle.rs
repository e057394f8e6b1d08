//! Brute-force semantics used as ground truth for the refinement engine.
//!
//! Everything here is computed from the definitions with plain sets and
//! sequences of labels. Nothing is shared with the engine: τ-closure, weak
//! steps and divergence have their own naive implementations.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::engine::Relation;
use crate::lts::{Lts, StateIndex, TAU};

/// Default limit on `2^|S_spec| · |S_impl|`.
pub const DEFAULT_ORACLE_BUDGET: u64 = 100_000;

pub type Trace = Vec<String>;
pub type Refusal = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle too large: 2^{spec_states} * {impl_states} exceeds the budget of {budget}")]
    TooLarge {
        spec_states: usize,
        impl_states: usize,
        budget: u64,
    },
}

/// The observations of an LTS restricted to traces of length at most `bound`.
///
/// Refusals are stored as maximal sets: for every trace only the
/// ⊆-maximal refusals are kept, and a pair `(ρ, X)` is a failure iff `X` is
/// contained in one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub bound: usize,
    pub alphabet: BTreeSet<String>,
    pub weaktraces: BTreeSet<Trace>,
    pub divergences: BTreeSet<Trace>,
    pub min_divergences: BTreeSet<Trace>,
    pub failures: BTreeSet<(Trace, Refusal)>,
    pub failures_bottom: BTreeSet<(Trace, Refusal)>,
}

impl Observation {
    /// `(trace, refusal) ∈ failures`.
    pub fn is_failure(&self, trace: &[&str], refusal: &[&str]) -> bool {
        is_refused(&self.failures, trace, refusal)
    }

    /// `(trace, refusal) ∈ failures_⊥`.
    pub fn is_failure_bottom(&self, trace: &[&str], refusal: &[&str]) -> bool {
        is_refused(&self.failures_bottom, trace, refusal)
    }

    pub fn has_trace(&self, trace: &[&str]) -> bool {
        self.weaktraces.contains(&to_trace(trace))
    }

    pub fn has_divergence(&self, trace: &[&str]) -> bool {
        self.divergences.contains(&to_trace(trace))
    }
}

fn to_trace(trace: &[&str]) -> Trace {
    trace.iter().map(|s| s.to_string()).collect()
}

fn is_refused(set: &BTreeSet<(Trace, Refusal)>, trace: &[&str], refusal: &[&str]) -> bool {
    let trace = to_trace(trace);
    let refusal: Refusal = refusal.iter().map(|s| s.to_string()).collect();
    set.iter()
        .any(|(t, maximal)| *t == trace && refusal.is_subset(maximal))
}

/// Distance to the nearest witness in the unpruned product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessDistance {
    Finite(usize),
    Infinite,
}

impl WitnessDistance {
    pub fn finite(self) -> Option<usize> {
        match self {
            WitnessDistance::Finite(d) => Some(d),
            WitnessDistance::Infinite => None,
        }
    }
}

impl fmt::Display for WitnessDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessDistance::Finite(d) => write!(f, "{d}"),
            WitnessDistance::Infinite => f.write_str("∞"),
        }
    }
}

type States = BTreeSet<StateIndex>;

/// Definition-level queries on one LTS.
struct Naive<'a> {
    lts: &'a Lts,
    diverging: Vec<bool>,
}

impl<'a> Naive<'a> {
    fn new(lts: &'a Lts) -> Self {
        let diverging = (0..lts.num_states())
            .map(|s| brute_force_diverges(lts, s))
            .collect();
        Naive { lts, diverging }
    }

    fn closure(&self, mut set: States) -> States {
        loop {
            let mut grown = set.clone();
            for &s in &set {
                for &(a, t) in self.lts.outgoing(s) {
                    if a == TAU {
                        grown.insert(t);
                    }
                }
            }
            if grown == set {
                return set;
            }
            set = grown;
        }
    }

    fn step(&self, set: &States, label: &str) -> States {
        let mut next = States::new();
        for &s in set {
            for &(a, t) in self.lts.outgoing(s) {
                if a != TAU && self.lts.label(a) == label {
                    next.insert(t);
                }
            }
        }
        self.closure(next)
    }

    fn initial(&self) -> States {
        self.closure(States::from([self.lts.initial()]))
    }

    fn stable(&self, s: StateIndex) -> bool {
        self.lts.outgoing(s).iter().all(|&(a, _)| a != TAU)
    }

    /// `Act ∖ enabled(s)`.
    fn maximal_refusal(&self, s: StateIndex, alphabet: &BTreeSet<String>) -> Refusal {
        let enabled: BTreeSet<&str> = self
            .lts
            .outgoing(s)
            .iter()
            .filter(|&&(a, _)| a != TAU)
            .map(|&(a, _)| self.lts.label(a))
            .collect();
        alphabet
            .iter()
            .filter(|a| !enabled.contains(a.as_str()))
            .cloned()
            .collect()
    }

    fn any_diverging(&self, set: &States) -> bool {
        set.iter().any(|&s| self.diverging[s])
    }

    /// Maximal refusals of the stable members of `set`.
    fn refusals(&self, set: &States, alphabet: &BTreeSet<String>) -> Vec<Refusal> {
        set.iter()
            .filter(|&&s| self.stable(s))
            .map(|&s| self.maximal_refusal(s, alphabet))
            .collect()
    }
}

/// `s` diverges iff a τ-path of `num_states + 1` steps starts in `s`.
pub fn brute_force_diverges(lts: &Lts, s: StateIndex) -> bool {
    let mut frontier = States::from([s]);
    for _ in 0..=lts.num_states() {
        frontier = frontier
            .iter()
            .flat_map(|&u| lts.outgoing(u).iter().filter(|&&(a, _)| a == TAU).map(|&(_, t)| t))
            .collect();
        if frontier.is_empty() {
            return false;
        }
    }
    true
}

fn visible_labels(lts: &Lts) -> BTreeSet<String> {
    lts.labels()[1..].iter().cloned().collect()
}

/// Keeps only the ⊆-maximal refusals per trace.
fn maximal_only(pairs: Vec<(Trace, Refusal)>) -> BTreeSet<(Trace, Refusal)> {
    let mut by_trace: BTreeMap<Trace, Vec<Refusal>> = BTreeMap::new();
    for (trace, refusal) in pairs {
        by_trace.entry(trace).or_default().push(refusal);
    }
    let mut out = BTreeSet::new();
    for (trace, refusals) in by_trace {
        for (i, r) in refusals.iter().enumerate() {
            let dominated = refusals
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && r.is_subset(other) && (r != other || j < i));
            if !dominated {
                out.insert((trace.clone(), r.clone()));
            }
        }
    }
    out
}

/// Enumerates all observations up to traces of length `bound`, layer by
/// layer. Each trace determines the τ-closed set it reaches and whether some
/// prefix of it was already a divergence.
pub fn observe(lts: &Lts, bound: usize) -> Observation {
    observe_over(lts, bound, &BTreeSet::new())
}

/// [`observe`] with `Act` enlarged by `extra` labels the LTS never performs.
pub fn observe_over(lts: &Lts, bound: usize, extra: &BTreeSet<String>) -> Observation {
    let naive = Naive::new(lts);
    let alphabet: BTreeSet<String> = visible_labels(lts).union(extra).cloned().collect();

    let mut weaktraces = BTreeSet::new();
    let mut divergences = BTreeSet::new();
    let mut min_divergences = BTreeSet::new();
    let mut failures = Vec::new();
    let mut failures_bottom = Vec::new();

    let mut layer: Vec<(Trace, States, bool)> = vec![(Vec::new(), naive.initial(), false)];
    for length in 0..=bound {
        let mut next = Vec::new();
        for (trace, set, prefix_diverged) in layer {
            if !set.is_empty() {
                weaktraces.insert(trace.clone());
            }
            let diverged = prefix_diverged || naive.any_diverging(&set);
            if diverged {
                divergences.insert(trace.clone());
                if !prefix_diverged {
                    min_divergences.insert(trace.clone());
                }
                failures_bottom.push((trace.clone(), alphabet.clone()));
            }
            for refusal in naive.refusals(&set, &alphabet) {
                failures.push((trace.clone(), refusal.clone()));
                failures_bottom.push((trace.clone(), refusal));
            }
            if length < bound {
                for a in &alphabet {
                    let successor = naive.step(&set, a);
                    if !successor.is_empty() || diverged {
                        let mut extended = trace.clone();
                        extended.push(a.clone());
                        next.push((extended, successor, diverged));
                    }
                }
            }
        }
        layer = next;
    }

    Observation {
        bound,
        alphabet,
        weaktraces,
        divergences,
        min_divergences,
        failures: maximal_only(failures),
        failures_bottom: maximal_only(failures_bottom),
    }
}

fn product_size(spec: &Lts, impl_: &Lts, budget: u64) -> Result<u64, OracleError> {
    let too_large = OracleError::TooLarge {
        spec_states: spec.num_states(),
        impl_states: impl_.num_states(),
        budget,
    };
    let states = u32::try_from(spec.num_states()).map_err(|_| too_large.clone())?;
    let size = 1u64
        .checked_shl(states)
        .filter(|_| states < 64)
        .and_then(|p| p.checked_mul(impl_.num_states() as u64))
        .ok_or_else(|| too_large.clone())?;
    if size > budget {
        return Err(too_large);
    }
    Ok(size)
}

/// Fails with [`OracleError::TooLarge`] unless `2^|S_spec| · |S_impl|` is
/// within `budget`.
pub fn check_budget(spec: &Lts, impl_: &Lts, budget: u64) -> Result<(), OracleError> {
    product_size(spec, impl_, budget).map(|_| ())
}

pub fn oracle_refines(spec: &Lts, impl_: &Lts, relation: Relation) -> Result<bool, OracleError> {
    oracle_refines_with_budget(spec, impl_, relation, DEFAULT_ORACLE_BUDGET)
}

/// Evaluates the inclusions defining `relation` for all traces up to length
/// `2^|S_spec| · |S_impl| + 1`.
///
/// Traces are enumerated breadth-first by the pair of sets they reach in
/// both LTSs together with their divergence status. Two traces reaching the
/// same pair have the same extensions, so only the first is expanded.
pub fn oracle_refines_with_budget(
    spec: &Lts,
    impl_: &Lts,
    relation: Relation,
    budget: u64,
) -> Result<bool, OracleError> {
    let bound = product_size(spec, impl_, budget)? + 1;
    let spec_n = Naive::new(spec);
    let impl_n = Naive::new(impl_);
    let alphabet: BTreeSet<String> = visible_labels(spec).union(&visible_labels(impl_)).cloned().collect();
    let fdr = relation == Relation::FailuresDivergences;

    // (spec set, trace ∈ divergences(spec), impl set, trace ∈ divergences(impl))
    type Joint = (States, bool, States, bool);
    let spec_init = spec_n.initial();
    let impl_init = impl_n.initial();
    let start: Joint = (
        spec_init.clone(),
        fdr && spec_n.any_diverging(&spec_init),
        impl_init.clone(),
        fdr && impl_n.any_diverging(&impl_init),
    );
    let mut seen: HashSet<Joint> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0u64)]);

    while let Some(((spec_set, spec_div, impl_set, impl_div), length)) = queue.pop_front() {
        let ok = match relation {
            Relation::Trace => impl_set.is_empty() || !spec_set.is_empty(),
            Relation::StableFailures => {
                (impl_set.is_empty() || !spec_set.is_empty())
                    && failures_included(&spec_n, &spec_set, &impl_n, &impl_set, &alphabet)
            }
            Relation::FailuresDivergences => {
                spec_div
                    || (!impl_div && failures_included(&spec_n, &spec_set, &impl_n, &impl_set, &alphabet))
            }
        };
        if !ok {
            return Ok(false);
        }
        // Past a specification divergence every observation is allowed.
        if length == bound || (fdr && spec_div) {
            continue;
        }
        for a in &alphabet {
            let impl_next = impl_n.step(&impl_set, a);
            let impl_next_div = impl_div || (fdr && impl_n.any_diverging(&impl_next));
            if impl_next.is_empty() && !impl_next_div {
                continue;
            }
            let spec_next = spec_n.step(&spec_set, a);
            let spec_next_div = fdr && (spec_div || spec_n.any_diverging(&spec_next));
            let joint = (spec_next, spec_next_div, impl_next, impl_next_div);
            if seen.insert(joint.clone()) {
                queue.push_back((joint, length + 1));
            }
        }
    }
    Ok(true)
}

/// Every stable-state refusal of `impl_set` is a refusal of `spec_set`.
fn failures_included(
    spec_n: &Naive<'_>,
    spec_set: &States,
    impl_n: &Naive<'_>,
    impl_set: &States,
    alphabet: &BTreeSet<String>,
) -> bool {
    let spec_refusals = spec_n.refusals(spec_set, alphabet);
    impl_n
        .refusals(impl_set, alphabet)
        .iter()
        .all(|x| spec_refusals.iter().any(|y| x.is_subset(y)))
}

/// Length of a shortest product path, τ-steps included, from the initial pair
/// to a witness.
pub fn shortest_witness_distance(spec: &Lts, impl_: &Lts, relation: Relation) -> Result<WitnessDistance, OracleError> {
    witness_search(spec, impl_, relation, DEFAULT_ORACLE_BUDGET, true)
}

pub fn shortest_witness_distance_with_budget(
    spec: &Lts,
    impl_: &Lts,
    relation: Relation,
    budget: u64,
) -> Result<WitnessDistance, OracleError> {
    witness_search(spec, impl_, relation, budget, true)
}

/// Like [`shortest_witness_distance`] but counting visible steps only, i.e.
/// the length of a shortest visible trace leading to a witness.
pub fn shortest_visible_witness_length(spec: &Lts, impl_: &Lts, relation: Relation) -> Result<WitnessDistance, OracleError> {
    witness_search(spec, impl_, relation, DEFAULT_ORACLE_BUDGET, false)
}

/// Search over the full product of the normal form (the fdr normal form for
/// failures-divergences) with the implementation. With `count_tau` every step
/// has weight one, otherwise τ-steps are free (0-1 breadth-first search).
fn witness_search(
    spec: &Lts,
    impl_: &Lts,
    relation: Relation,
    budget: u64,
    count_tau: bool,
) -> Result<WitnessDistance, OracleError> {
    product_size(spec, impl_, budget)?;
    let spec_n = Naive::new(spec);
    let impl_n = Naive::new(impl_);
    let alphabet: BTreeSet<String> = visible_labels(spec).union(&visible_labels(impl_)).cloned().collect();

    let is_witness = |u: &States, s: StateIndex| -> bool {
        let refusal_witness = || {
            impl_n.stable(s) && {
                let x = impl_n.maximal_refusal(s, &alphabet);
                !spec_n.refusals(u, &alphabet).iter().any(|y| x.is_subset(y))
            }
        };
        match relation {
            Relation::Trace => u.is_empty(),
            Relation::StableFailures => u.is_empty() || refusal_witness(),
            Relation::FailuresDivergences => {
                !spec_n.any_diverging(u) && (u.is_empty() || impl_n.diverging[s] || refusal_witness())
            }
        }
    };

    let start = (spec_n.initial(), impl_.initial());
    let mut settled = HashSet::new();
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some(((u, s), distance)) = queue.pop_front() {
        if !settled.insert((u.clone(), s)) {
            continue;
        }
        if is_witness(&u, s) {
            return Ok(WitnessDistance::Finite(distance));
        }
        let blocked = relation == Relation::FailuresDivergences && spec_n.any_diverging(&u);
        for &(a, t) in impl_.outgoing(s) {
            if a == TAU {
                if count_tau {
                    queue.push_back(((u.clone(), t), distance + 1));
                } else {
                    queue.push_front(((u.clone(), t), distance));
                }
            } else if !blocked {
                queue.push_back(((spec_n.step(&u, impl_.label(a)), t), distance + 1));
            }
        }
    }
    Ok(WitnessDistance::Infinite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lts::LtsBuilder;

    #[test]
    fn spec_failures_after_req_20() {
        let obs = observe(&fixtures::spec_s0(), 2);
        assert!(obs.is_failure(&["req", "20"], &["10"]));
        assert!(obs.is_failure(&["req", "20"], &["10", "20"]));
        assert!(!obs.is_failure(&["req", "20"], &["req"]));
    }

    #[test]
    fn u0_diverges_after_req() {
        let act = BTreeSet::from(["req".to_string(), "10".to_string(), "20".to_string()]);
        let obs = observe_over(&fixtures::impl_u0(), 2, &act);
        assert!(obs.has_divergence(&["req", "10"]));
        assert!(obs.has_divergence(&["req"]));
        assert!(!obs.has_divergence(&[]));
        assert_eq!(obs.min_divergences, BTreeSet::from([to_trace(&["req"])]));
        assert!(obs.is_failure_bottom(&["req", "10"], &["10"]));
    }

    #[test]
    fn single_state_observations() {
        let mut b = LtsBuilder::new(1, 0);
        b.action("a");
        let lts = b.build();
        let obs = observe(&lts, 3);
        assert_eq!(obs.weaktraces, BTreeSet::from([Vec::new()]));
        assert!(obs.divergences.is_empty());
        assert!(obs.is_failure(&[], &["a"]));
        assert_eq!(obs.failures.len(), 1);
    }

    #[test]
    fn cash_machine_refinement_examples() {
        let s0 = fixtures::spec_s0();
        let t0 = fixtures::impl_t0();
        assert_eq!(oracle_refines(&s0, &t0, Relation::Trace), Ok(true));
        assert_eq!(oracle_refines(&s0, &t0, Relation::StableFailures), Ok(false));
        for lts in [fixtures::spec_s0(), fixtures::impl_u0(), fixtures::incorrect_s2()] {
            for r in Relation::ALL {
                assert_eq!(oracle_refines(&lts, &lts, r), Ok(true));
            }
        }
    }

    #[test]
    fn witness_distances() {
        let s0 = fixtures::spec_s0();
        let t0 = fixtures::impl_t0();
        let u0 = fixtures::impl_u0();
        assert_eq!(
            shortest_witness_distance(&s0, &t0, Relation::StableFailures),
            Ok(WitnessDistance::Finite(2))
        );
        assert_eq!(
            shortest_witness_distance(&s0, &t0, Relation::Trace),
            Ok(WitnessDistance::Infinite)
        );
        // req τ 10: the visible trace req·10 has length 2, the product path 3.
        assert_eq!(
            shortest_witness_distance(&u0, &s0, Relation::Trace),
            Ok(WitnessDistance::Finite(3))
        );
        assert_eq!(
            shortest_visible_witness_length(&u0, &s0, Relation::Trace),
            Ok(WitnessDistance::Finite(2))
        );
    }

    #[test]
    fn budget_is_enforced() {
        let big = crate::generate::gen_ladder(20, 1);
        assert!(matches!(
            oracle_refines(&big, &big, Relation::Trace),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_divergence() {
        let u0 = fixtures::impl_u0();
        assert!(!brute_force_diverges(&u0, 0));
        assert!(brute_force_diverges(&u0, 1));
    }
}
