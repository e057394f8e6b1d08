//! Antichains of product states ordered by `(U,s) ≤ (V,t) iff s = t ∧ U ⊆ V`.

use crate::lts::{StateIndex, StateSet};
use crate::normal::NormState;

/// A state `(U, s)` of the product of a normal form with an implementation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductPair {
    pub spec: NormState,
    pub impl_state: StateIndex,
}

impl ProductPair {
    pub fn new(spec: NormState, impl_state: StateIndex) -> Self {
        ProductPair { spec, impl_state }
    }
}

pub fn leq(x: &ProductPair, y: &ProductPair) -> bool {
    x.impl_state == y.impl_state && x.spec.states.is_subset(&y.spec.states)
}

/// A set of product states, bucketed by implementation state. Only the spec
/// sets are stored; divergence flags are a function of the set.
///
/// The improved algorithms keep it a proper antichain. The legacy insertion
/// [`Antichain::insert_unchecked`] may break properness.
#[derive(Debug, Clone, Default)]
pub struct Antichain {
    buckets: Vec<Vec<StateSet>>,
    len: usize,
}

impl Antichain {
    pub fn new() -> Self {
        Antichain::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `x ⋐ A`: some stored pair is ≤ `x`.
    pub fn member(&self, x: &ProductPair) -> bool {
        self.member_parts(&x.spec.states, x.impl_state)
    }

    pub fn member_parts(&self, spec: &StateSet, impl_state: StateIndex) -> bool {
        self.buckets
            .get(impl_state)
            .is_some_and(|bucket| bucket.iter().any(|stored| stored.is_subset(spec)))
    }

    /// `A ⋓ x` for `x` that is not a member; the result stays proper.
    pub fn insert(&mut self, x: ProductPair) {
        self.insert_parts(x.spec.states, x.impl_state);
    }

    pub fn insert_parts(&mut self, spec: StateSet, impl_state: StateIndex) {
        debug_assert!(
            !self.member_parts(&spec, impl_state),
            "antichain insertion of a pair that is already covered"
        );
        self.insert_unchecked(spec, impl_state);
    }

    /// `A ⋓ x` exactly as defined, `{y | y = x ∨ (y ∈ A ∧ x ≰ y)}`, without the
    /// membership precondition. Inserting a pair that some stored pair is
    /// strictly below leaves the set improper.
    pub fn insert_unchecked(&mut self, spec: StateSet, impl_state: StateIndex) {
        if self.buckets.len() <= impl_state {
            self.buckets.resize_with(impl_state + 1, Vec::new);
        }
        let bucket = &mut self.buckets[impl_state];
        let before = bucket.len();
        bucket.retain(|stored| !spec.is_subset(stored));
        let evicted = before - bucket.len();
        bucket.push(spec);
        self.len = self.len + 1 - evicted;
    }

    /// True iff `(spec, impl_state)` is stored exactly.
    pub fn contains_exact(&self, spec: &StateSet, impl_state: StateIndex) -> bool {
        self.buckets
            .get(impl_state)
            .is_some_and(|bucket| bucket.contains(spec))
    }

    /// Stored pairs as `(impl state, spec set)`, grouped by implementation state.
    pub fn iter(&self) -> impl Iterator<Item = (StateIndex, &StateSet)> + '_ {
        self.buckets
            .iter()
            .enumerate()
            .flat_map(|(s, bucket)| bucket.iter().map(move |u| (s, u)))
    }

    /// No two stored pairs are ≤-comparable.
    pub fn is_proper(&self) -> bool {
        self.buckets.iter().all(|bucket| {
            bucket.iter().enumerate().all(|(i, x)| {
                bucket
                    .iter()
                    .enumerate()
                    .all(|(j, y)| i == j || !x.is_subset(y))
            })
        })
    }
}
