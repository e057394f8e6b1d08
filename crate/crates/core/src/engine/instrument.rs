//! Per-iteration invariant logging.

use serde::Serialize;

use crate::lts::{align, Lts, StateIndex, StateSet};

use super::{improved, legacy, CheckError, ExplorationConfig, Relation, Variant, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum InvariantViolation {
    /// A scheduled pair is not covered by the antichain.
    WorkingNotCovered { spec: StateSet, impl_state: StateIndex },
    /// A processed pair is not covered by the antichain.
    DoneNotCovered { spec: StateSet, impl_state: StateIndex },
    DuplicateInWorking { spec: StateSet, impl_state: StateIndex },
    DoneAndWorking { spec: StateSet, impl_state: StateIndex },
    /// Two stored pairs are ≤-comparable.
    ImproperAntichain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    /// 1-based loop iteration.
    pub iteration: u64,
    /// Size of `working` at the end of the iteration.
    pub working_len: usize,
    pub antichain_len: usize,
    pub violations: Vec<InvariantViolation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InstrumentationLog {
    /// One record per iteration that ran to completion; the iteration that
    /// returns a verdict early is not recorded.
    pub iterations: Vec<IterationRecord>,
    /// The stored pairs as `(spec set, impl state)` when the run ended.
    pub final_antichain: Vec<(StateSet, StateIndex)>,
}

impl InstrumentationLog {
    pub fn violations(&self) -> impl Iterator<Item = &InvariantViolation> + '_ {
        self.iterations.iter().flat_map(|r| r.violations.iter())
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn properness_violations(&self) -> usize {
        self.violations()
            .filter(|v| matches!(v, InvariantViolation::ImproperAntichain))
            .count()
    }
}

/// Runs a check while evaluating, after every loop iteration, that every pair
/// in `working` or already processed is covered by the antichain, that
/// `working` holds no duplicates and no processed pair, and that the antichain
/// is proper. Violations are recorded, never raised, for either variant.
pub fn run_with_instrumentation(
    spec: &Lts,
    impl_: &Lts,
    config: &ExplorationConfig,
) -> (Result<Verdict, CheckError>, InstrumentationLog) {
    let (spec, impl_) = align(spec, impl_);
    let mut log = InstrumentationLog::default();
    let result = match config.variant {
        Variant::Improved => improved::run(&spec, &impl_, config, Some(&mut log)),
        Variant::Legacy => {
            if config.relation == Relation::FailuresDivergences && !config.allow_unsound_legacy_fdr {
                Err(CheckError::UnsoundLegacyFdr)
            } else {
                legacy::run(&spec, &impl_, config, Some(&mut log))
            }
        }
    };
    (result, log)
}
