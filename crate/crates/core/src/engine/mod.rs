//! Antichain-based refinement checking.
//!
//! Both variants explore the product of the specification's normal form with
//! the implementation. [`Variant::Improved`] inserts pairs into the antichain
//! when they are discovered and only checks refusals of stable
//! implementation states. [`Variant::Legacy`] is the older formulation that
//! inserts at pop time, may schedule a pair more than once, and tests
//! divergence in an order that is unsound for failures-divergences.

mod improved;
mod instrument;
mod legacy;
mod session;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::lts::{align, Lts, StateIndex, StateSet};

pub use instrument::{run_with_instrumentation, InstrumentationLog, InvariantViolation, IterationRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Trace,
    StableFailures,
    FailuresDivergences,
}

impl Relation {
    pub const ALL: [Relation; 3] = [
        Relation::Trace,
        Relation::StableFailures,
        Relation::FailuresDivergences,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Trace => "trace",
            Relation::StableFailures => "stable-failures",
            Relation::FailuresDivergences => "failures-divergences",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trace" | "tr" => Ok(Relation::Trace),
            "stable-failures" | "sfr" => Ok(Relation::StableFailures),
            "failures-divergences" | "fdr" => Ok(Relation::FailuresDivergences),
            other => Err(format!("unknown relation {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// `working` is a stack.
    DepthFirst,
    /// `working` is a FIFO queue.
    BreadthFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    Improved,
    Legacy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationConfig {
    pub relation: Relation,
    pub strategy: Strategy,
    pub variant: Variant,
    /// Panic when an improved run breaks its loop invariants.
    pub invariant_checks: bool,
    /// Required to run the legacy failures-divergences check, which can
    /// return wrong verdicts.
    pub allow_unsound_legacy_fdr: bool,
    /// Abort once more than this many pairs have been pushed into `working`.
    pub node_budget: Option<u64>,
}

impl ExplorationConfig {
    pub fn new(relation: Relation, strategy: Strategy, variant: Variant) -> Self {
        ExplorationConfig {
            relation,
            strategy,
            variant,
            invariant_checks: false,
            allow_unsound_legacy_fdr: false,
            node_budget: None,
        }
    }

    pub fn improved(relation: Relation, strategy: Strategy) -> Self {
        ExplorationConfig::new(relation, strategy, Variant::Improved)
    }

    pub fn legacy(relation: Relation, strategy: Strategy) -> Self {
        ExplorationConfig {
            allow_unsound_legacy_fdr: relation == Relation::FailuresDivergences,
            ..ExplorationConfig::new(relation, strategy, Variant::Legacy)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// The implementation performs a trace the specification cannot.
    EmptySpec,
    /// A stable implementation state refuses more than the specification.
    Refusal,
    /// The implementation diverges where the specification does not.
    Divergence,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::EmptySpec => "empty-spec",
            WitnessKind::Refusal => "refusal",
            WitnessKind::Divergence => "divergence",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub working_max: u64,
    /// Membership tests that found a covering pair.
    pub antichain_hits: u64,
    pub antichain_misses: u64,
    pub antichain_max: u64,
    /// Number of pairs popped from `working`.
    pub pairs_done: u64,
}

impl Metrics {
    pub fn membership_tests(&self) -> u64 {
        self.antichain_hits + self.antichain_misses
    }
}

/// The product state at which non-refinement was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub spec: Vec<StateIndex>,
    pub impl_state: StateIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub refines: bool,
    pub witness_kind: Option<WitnessKind>,
    /// Visible actions leading from the initial pair to the witness.
    pub counterexample: Option<Vec<String>>,
    /// Product steps to the witness, τ-steps included.
    pub witness_depth: Option<usize>,
    pub witness: Option<WitnessPair>,
    pub metrics: Metrics,
}

impl Verdict {
    pub(crate) fn holds(metrics: Metrics) -> Self {
        Verdict {
            refines: true,
            witness_kind: None,
            counterexample: None,
            witness_depth: None,
            witness: None,
            metrics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(
        "the legacy failures-divergences algorithm is unsound (it can reject a refinement of a \
         diverging specification and accept a diverging implementation of one); pass the \
         explicit acknowledgement to run it anyway"
    )]
    UnsoundLegacyFdr,
    #[error("node budget exceeded ({} pairs explored)", .0.pairs_done)]
    BudgetExceeded(Metrics),
}

/// Decides whether `impl_` refines `spec` under `config`. The two LTSs are
/// first brought onto the union of their visible alphabets.
pub fn refines(spec: &Lts, impl_: &Lts, config: &ExplorationConfig) -> Result<Verdict, CheckError> {
    let (spec, impl_) = align(spec, impl_);
    match config.variant {
        Variant::Improved => refines_improved(&spec, &impl_, config),
        Variant::Legacy => refines_legacy(&spec, &impl_, config),
    }
}

/// The improved algorithms; expects aligned inputs (see [`align`]).
pub fn refines_improved(spec: &Lts, impl_: &Lts, config: &ExplorationConfig) -> Result<Verdict, CheckError> {
    debug_assert_eq!(spec.labels()[1..], impl_.labels()[1..], "inputs must share one alphabet");
    let mut log = config.invariant_checks.then(InstrumentationLog::default);
    let verdict = improved::run(spec, impl_, config, log.as_mut());
    if let Some(log) = log {
        let violations: usize = log.iterations.iter().map(|r| r.violations.len()).sum();
        assert_eq!(violations, 0, "loop invariant violated: {log:?}");
    }
    verdict
}

/// The legacy algorithms; expects aligned inputs (see [`align`]).
pub fn refines_legacy(spec: &Lts, impl_: &Lts, config: &ExplorationConfig) -> Result<Verdict, CheckError> {
    debug_assert_eq!(spec.labels()[1..], impl_.labels()[1..], "inputs must share one alphabet");
    if config.relation == Relation::FailuresDivergences && !config.allow_unsound_legacy_fdr {
        return Err(CheckError::UnsoundLegacyFdr);
    }
    legacy::run(spec, impl_, config, None)
}

/// `refusals(impl_state) ⊆ refusals(U)` for a stable `impl_state`: some stable
/// member of `U` enables only visible actions that `impl_state` enables too.
pub fn refusals_included(spec: &Lts, impl_: &Lts, impl_state: StateIndex, u: &StateSet) -> bool {
    debug_assert!(impl_.is_stable(impl_state));
    let enabled = impl_.enabled(impl_state);
    u.iter().any(|t| {
        spec.is_stable(t)
            && spec
                .enabled_visible(t)
                .all(|a| enabled.binary_search(&a).is_ok())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn refusal_inclusion() {
        let (s0, t0) = align(&fixtures::spec_s0(), &fixtures::impl_t0());
        assert!(!refusals_included(&s0, &t0, 2, &StateSet::singleton(0)));

        let u0 = fixtures::impl_u0();
        assert!(refusals_included(&u0, &u0, 0, &StateSet::singleton(0)));

        // An implementation state enabling everything refuses only ∅.
        let mut b = crate::lts::LtsBuilder::new(2, 0);
        b.add(0, Some("x"), 1).add(0, Some("y"), 1).add(1, None, 1);
        let everything = b.build();
        assert!(refusals_included(&everything, &everything, 0, &StateSet::singleton(0)));
        // Only unstable members: nothing is refused there.
        assert!(!refusals_included(&everything, &everything, 0, &StateSet::singleton(1)));
    }

    #[test]
    fn legacy_fdr_requires_acknowledgement() {
        let s = fixtures::incorrect_s0();
        let mut config = ExplorationConfig::new(Relation::FailuresDivergences, Strategy::DepthFirst, Variant::Legacy);
        assert_eq!(refines(&s, &s, &config), Err(CheckError::UnsoundLegacyFdr));
        config.allow_unsound_legacy_fdr = true;
        assert!(refines(&s, &s, &config).is_ok());
    }

    #[test]
    fn relation_names_round_trip() {
        for r in Relation::ALL {
            assert_eq!(r.name().parse::<Relation>(), Ok(r));
        }
    }
}
