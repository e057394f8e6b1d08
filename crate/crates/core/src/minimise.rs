//! Reduction modulo divergence-preserving branching bisimulation by signature
//! refinement.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::divergence::mark_divergent;
use crate::lts::{ActionIndex, Lts, LtsBuilder, StateIndex, TAU};
use crate::scc::tarjan;

/// Blocks are numbered in order of their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub block_of: Vec<usize>,
    pub num_blocks: usize,
}

impl Partition {
    fn from_keys<K: Eq + std::hash::Hash>(keys: impl Iterator<Item = K>) -> Self {
        let mut ids = HashMap::new();
        let block_of: Vec<usize> = keys
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition {
            block_of,
            num_blocks: ids.len(),
        }
    }

    pub fn block(&self, state: StateIndex) -> usize {
        self.block_of[state]
    }
}

type Signature = BTreeSet<(ActionIndex, usize)>;

/// The coarsest divergence-preserving branching bisimulation.
///
/// The signature of `s` collects `(a, block(t))` for every `s' --a--> t`
/// where `s'` is reachable from `s` by inert τ-steps (τ-steps inside the
/// current block) and the step itself is not inert, together with a flag for
/// an infinite inert τ-path from `s`. States are split by their signature
/// until the partition is stable; the initial partition separates diverging
/// from non-diverging states.
pub fn dpbb_partition(lts: &Lts) -> Partition {
    let marking = mark_divergent(lts);
    let n = lts.num_states();
    let mut partition = Partition::from_keys(marking.as_slice().iter().copied());

    loop {
        let block = &partition.block_of;
        let components = tarjan(n, |s| {
            lts.successors(s, TAU)
                .filter(|&t| block[t] == block[s])
                .collect::<Vec<_>>()
        });
        let mut component_of = vec![0usize; n];
        for (i, component) in components.iter().enumerate() {
            for &s in component {
                component_of[s] = i;
            }
        }

        // Inert successors of a component appear earlier in `components`.
        let mut signatures: Vec<(Signature, bool)> = Vec::with_capacity(components.len());
        for (i, component) in components.iter().enumerate() {
            let mut signature = Signature::new();
            let mut inert_divergence = false;
            for &s in component {
                for &(a, t) in lts.outgoing(s) {
                    if a == TAU && block[t] == block[s] {
                        let j = component_of[t];
                        if j == i {
                            inert_divergence = true;
                        } else {
                            signature.extend(signatures[j].0.iter().copied());
                            inert_divergence |= signatures[j].1;
                        }
                    } else {
                        signature.insert((a, block[t]));
                    }
                }
            }
            signatures.push((signature, inert_divergence));
        }

        let refined = Partition::from_keys((0..n).map(|s| (block[s], &signatures[component_of[s]])));
        if refined.num_blocks == partition.num_blocks {
            return partition;
        }
        partition = refined;
    }
}

/// One state per block. Inert τ-steps are dropped, except that a block
/// containing a diverging state keeps a τ self-loop.
pub fn quotient(lts: &Lts, partition: &Partition) -> Lts {
    let marking = mark_divergent(lts);
    let block = &partition.block_of;
    let mut builder = LtsBuilder::with_labels(partition.num_blocks, block[lts.initial()], lts.labels());
    let mut seen = HashSet::new();
    for (s, a, t) in lts.transitions() {
        let edge = (block[s], a, block[t]);
        let inert = a == TAU && block[s] == block[t];
        if inert && !marking.is_diverging(s) {
            continue;
        }
        if seen.insert(edge) {
            builder.add_transition(edge.0, edge.1, edge.2);
        }
    }
    builder.build()
}

pub fn minimise(lts: &Lts) -> Lts {
    quotient(lts, &dpbb_partition(lts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::observe;

    #[test]
    fn deterministic_tau_free_is_minimal() {
        let l = crate::generate::gen_ladder(4, 2);
        let p = dpbb_partition(&l);
        assert_eq!(p.num_blocks, 4);
        let q = quotient(&l, &p);
        assert_eq!(q.num_states(), 4);
        assert_eq!(q.num_transitions(), l.num_transitions());
    }

    #[test]
    fn inert_tau_is_merged() {
        // 0 -τ-> 1 -a-> 2, and 0 -a-> 2
        let mut b = LtsBuilder::new(3, 0);
        b.add(0, None, 1).add(1, Some("a"), 2).add(0, Some("a"), 2);
        let l = b.build();
        let p = dpbb_partition(&l);
        assert_eq!(p.block(0), p.block(1));
        assert_ne!(p.block(0), p.block(2));
        let q = quotient(&l, &p);
        assert_eq!(q.num_states(), 2);
        assert_eq!(observe(&q, 4), observe(&l, 4));
    }

    #[test]
    fn diverging_state_stays_apart() {
        let u0 = fixtures::impl_u0();
        let p = dpbb_partition(&u0);
        assert_ne!(p.block(1), p.block(0));
        assert_ne!(p.block(1), p.block(2));
        let q = quotient(&u0, &p);
        assert_eq!(observe(&q, 5), observe(&u0, 5));
    }

    #[test]
    fn quotient_is_idempotent() {
        let l = fixtures::spec_s0();
        let q1 = minimise(&l);
        let q2 = minimise(&q1);
        assert_eq!(q1.num_states(), q2.num_states());
        assert_eq!(q1.num_transitions(), q2.num_transitions());
        assert_eq!(observe(&q1, 6), observe(&l, 6));
    }
}
