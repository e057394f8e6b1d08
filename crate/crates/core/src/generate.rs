//! Benchmark and test-input generators.

use std::collections::VecDeque;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lts::{Lts, LtsBuilder, StateIndex, TAU};

/// The ladder `L_n^k`: states s_1..s_n with initial state s_n and, for every
/// 1 < i <= n, transitions s_i --a_j--> s_{i-1} for all 1 <= j <= k.
///
/// State s_i has index i - 1; labels are `a1`..`ak`.
pub fn gen_ladder(n: usize, k: usize) -> Lts {
    assert!(n >= 1 && k >= 1, "ladder needs n >= 1 and k >= 1");
    let mut builder = LtsBuilder::new(n, n - 1);
    let actions: Vec<_> = (1..=k).map(|j| builder.action(&format!("a{j}"))).collect();
    for i in (2..=n).rev() {
        for &a in &actions {
            builder.add_transition(i - 1, a, i - 2);
        }
    }
    builder.build()
}

/// Parameters for [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomLtsParams {
    pub num_states: usize,
    pub num_actions: usize,
    /// Probability of each visible transition `(s, a, t)`.
    pub transition_density: f64,
    /// Probability of each τ-transition `(s, τ, t)`.
    pub tau_density: f64,
    pub seed: u64,
}

/// A reproducible random LTS. Every candidate transition is drawn
/// independently; states unreachable from the initial state 0 are pruned and
/// the rest renumbered in breadth-first order. All `num_actions` labels
/// (`a`, `b`, ... for up to 26 actions, `a0`, `a1`, ... otherwise) are part of
/// the alphabet even when unused.
pub fn gen_random(params: RandomLtsParams) -> Lts {
    let RandomLtsParams {
        num_states,
        num_actions,
        transition_density,
        tau_density,
        seed,
    } = params;
    assert!(num_states >= 1, "need at least one state");
    assert!((0.0..=1.0).contains(&transition_density) && (0.0..=1.0).contains(&tau_density));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(StateIndex, usize, StateIndex)> = Vec::new();
    for s in 0..num_states {
        for t in 0..num_states {
            if rng.random_bool(tau_density) {
                edges.push((s, TAU, t));
            }
            for a in 1..=num_actions {
                if rng.random_bool(transition_density) {
                    edges.push((s, a, t));
                }
            }
        }
    }

    // Breadth-first renumbering of the reachable part.
    let mut renumber = vec![usize::MAX; num_states];
    renumber[0] = 0;
    let mut order = vec![0];
    let mut queue = VecDeque::from([0]);
    while let Some(s) = queue.pop_front() {
        for &(from, _, to) in &edges {
            if from == s && renumber[to] == usize::MAX {
                renumber[to] = order.len();
                order.push(to);
                queue.push_back(to);
            }
        }
    }

    let mut builder = LtsBuilder::new(order.len(), 0);
    for a in 1..=num_actions {
        builder.action(&random_label(a - 1, num_actions));
    }
    for &(from, a, to) in &edges {
        if renumber[from] != usize::MAX {
            builder.add_transition(renumber[from], a, renumber[to]);
        }
    }
    builder.build()
}

/// Limits of [`random_pair_suite`].
pub const SUITE_MAX_STATES: usize = 5;
pub const SUITE_MAX_ACTIONS: usize = 3;
pub const SUITE_MAX_TAU_DENSITY: f64 = 0.3;

/// A reproducible list of `(spec, impl)` pairs with at most
/// [`SUITE_MAX_STATES`] states, [`SUITE_MAX_ACTIONS`] visible actions and
/// τ-density at most [`SUITE_MAX_TAU_DENSITY`] each. Labels are drawn from
/// one shared pool so the alphabets overlap.
pub fn random_pair_suite(count: usize, seed: u64) -> Vec<(Lts, Lts)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let spec = gen_random(random_params(&mut rng));
            let impl_ = gen_random(random_params(&mut rng));
            (spec, impl_)
        })
        .collect()
}

/// Parameters within the limits of [`random_pair_suite`].
pub fn random_params(rng: &mut ChaCha8Rng) -> RandomLtsParams {
    RandomLtsParams {
        num_states: rng.random_range(1..=SUITE_MAX_STATES),
        num_actions: rng.random_range(1..=SUITE_MAX_ACTIONS),
        transition_density: rng.random_range(0.05..=0.45),
        tau_density: rng.random_range(0.0..=SUITE_MAX_TAU_DENSITY),
        seed: rng.random(),
    }
}

fn random_label(index: usize, num_actions: usize) -> String {
    if num_actions <= 26 {
        char::from(b'a' + index as u8).to_string()
    } else {
        format!("a{index}")
    }
}
