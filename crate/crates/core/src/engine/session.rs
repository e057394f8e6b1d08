//! State shared by all exploration loops: the normalisation session, the
//! worklist, parent links and metrics.

use std::collections::{HashSet, VecDeque};

use crate::antichain::Antichain;
use crate::divergence::{mark_divergent, DivergenceMarking};
use crate::lts::{ActionIndex, Lts, StateIndex, TAU};
use crate::normal::{NormId, Normaliser};

use super::instrument::{InstrumentationLog, InvariantViolation, IterationRecord};
use super::{CheckError, ExplorationConfig, Metrics, Strategy, Verdict, WitnessKind, WitnessPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Entry {
    pub spec: NormId,
    pub impl_state: u32,
    /// Parent-link node of this entry.
    pub node: u32,
    /// Product steps from the initial pair, τ-steps included.
    pub depth: u32,
}

impl Entry {
    pub fn key(&self) -> (NormId, u32) {
        (self.spec, self.impl_state)
    }
}

/// One edge of the exploration tree; node 0 is the initial pair.
#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u32,
    action: ActionIndex,
}

pub(crate) struct Session<'a> {
    pub spec: &'a Lts,
    pub impl_: &'a Lts,
    pub norm: Normaliser<'a>,
    pub impl_marking: DivergenceMarking,
    pub antichain: Antichain,
    pub metrics: Metrics,
    working: VecDeque<Entry>,
    strategy: Strategy,
    nodes: Vec<Node>,
    pushes: u64,
    budget: Option<u64>,
    /// Pairs already popped; tracked only when instrumenting.
    done: Option<HashSet<(NormId, u32)>>,
}

impl<'a> Session<'a> {
    pub fn new(spec: &'a Lts, impl_: &'a Lts, config: &ExplorationConfig, fdr_normal_form: bool, track_done: bool) -> Self {
        Session {
            spec,
            impl_,
            norm: Normaliser::new(spec, fdr_normal_form),
            impl_marking: mark_divergent(impl_),
            antichain: Antichain::new(),
            metrics: Metrics::default(),
            working: VecDeque::new(),
            strategy: config.strategy,
            nodes: vec![Node {
                parent: u32::MAX,
                action: TAU,
            }],
            pushes: 0,
            budget: config.node_budget,
            done: track_done.then(HashSet::new),
        }
    }

    /// Pushes the initial pair with node 0.
    pub fn push_initial(&mut self) -> Result<Entry, CheckError> {
        let entry = Entry {
            spec: self.norm.initial(),
            impl_state: self.impl_.initial() as u32,
            node: 0,
            depth: 0,
        };
        self.push_entry(entry)?;
        Ok(entry)
    }

    /// Creates the entry for the successor of `parent` by `action`.
    pub fn child(&mut self, parent: &Entry, action: ActionIndex, spec: NormId, impl_state: StateIndex) -> Entry {
        self.nodes.push(Node {
            parent: parent.node,
            action,
        });
        Entry {
            spec,
            impl_state: impl_state as u32,
            node: (self.nodes.len() - 1) as u32,
            depth: parent.depth + 1,
        }
    }

    pub fn push_entry(&mut self, entry: Entry) -> Result<(), CheckError> {
        self.pushes += 1;
        if self.budget.is_some_and(|b| self.pushes > b) {
            return Err(CheckError::BudgetExceeded(self.metrics));
        }
        self.working.push_back(entry);
        self.metrics.working_max = self.metrics.working_max.max(self.working.len() as u64);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<Entry> {
        let entry = match self.strategy {
            Strategy::DepthFirst => self.working.pop_back(),
            Strategy::BreadthFirst => self.working.pop_front(),
        }?;
        self.metrics.pairs_done += 1;
        Some(entry)
    }

    /// Antichain membership test, counted in the metrics.
    pub fn member(&mut self, spec: NormId, impl_state: StateIndex) -> bool {
        let hit = self
            .antichain
            .member_parts(&self.norm.get(spec).states, impl_state);
        if hit {
            self.metrics.antichain_hits += 1;
        } else {
            self.metrics.antichain_misses += 1;
        }
        hit
    }

    pub fn antichain_insert(&mut self, spec: NormId, impl_state: StateIndex) {
        let states = self.norm.get(spec).states.clone();
        self.antichain.insert_parts(states, impl_state);
        self.note_antichain_size();
    }

    pub fn antichain_insert_unchecked(&mut self, spec: NormId, impl_state: StateIndex) {
        let states = self.norm.get(spec).states.clone();
        self.antichain.insert_unchecked(states, impl_state);
        self.note_antichain_size();
    }

    fn note_antichain_size(&mut self) {
        self.metrics.antichain_max = self.metrics.antichain_max.max(self.antichain.len() as u64);
    }

    pub fn mark_done(&mut self, entry: &Entry) {
        if let Some(done) = &mut self.done {
            done.insert(entry.key());
        }
    }

    pub fn fail(&self, kind: WitnessKind, at: &Entry) -> Verdict {
        let mut actions = Vec::new();
        let mut node = at.node;
        while node != 0 {
            let n = self.nodes[node as usize];
            actions.push(n.action);
            node = n.parent;
        }
        actions.reverse();
        let counterexample = actions
            .iter()
            .filter(|&&a| a != TAU)
            .map(|&a| self.impl_.label(a).to_string())
            .collect();
        Verdict {
            refines: false,
            witness_kind: Some(kind),
            counterexample: Some(counterexample),
            witness_depth: Some(actions.len()),
            witness: Some(WitnessPair {
                spec: self.norm.get(at.spec).states.iter().collect(),
                impl_state: at.impl_state as usize,
            }),
            metrics: self.metrics,
        }
    }

    /// Evaluates the loop invariants after one iteration and appends the
    /// record to `log`.
    pub fn record_iteration(&self, log: &mut InstrumentationLog, iteration: u64) {
        let mut violations = Vec::new();
        let covered = |key: (NormId, u32)| {
            self.antichain
                .member_parts(&self.norm.get(key.0).states, key.1 as usize)
        };
        let pair = |key: (NormId, u32)| (self.norm.get(key.0).states.clone(), key.1 as usize);

        let mut seen = HashSet::new();
        for entry in &self.working {
            let key = entry.key();
            if !covered(key) {
                let (spec, impl_state) = pair(key);
                violations.push(InvariantViolation::WorkingNotCovered { spec, impl_state });
            }
            if !seen.insert(key) {
                let (spec, impl_state) = pair(key);
                violations.push(InvariantViolation::DuplicateInWorking { spec, impl_state });
            }
        }
        if let Some(done) = &self.done {
            for &key in done {
                if !covered(key) {
                    let (spec, impl_state) = pair(key);
                    violations.push(InvariantViolation::DoneNotCovered { spec, impl_state });
                }
                if seen.contains(&key) {
                    let (spec, impl_state) = pair(key);
                    violations.push(InvariantViolation::DoneAndWorking { spec, impl_state });
                }
            }
        }
        if !self.antichain.is_proper() {
            violations.push(InvariantViolation::ImproperAntichain);
        }
        log.iterations.push(IterationRecord {
            iteration,
            working_len: self.working.len(),
            antichain_len: self.antichain.len(),
            violations,
        });
    }

    pub fn finish_log(&self, log: &mut InstrumentationLog) {
        log.final_antichain = self
            .antichain
            .iter()
            .map(|(s, u)| (u.clone(), s))
            .collect();
    }
}
