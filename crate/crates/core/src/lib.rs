//! Refinement checking for finite labelled transition systems.
//!
//! Decides trace, stable-failures and failures-divergences refinement by
//! exploring the product of an on-the-fly normal form of the specification
//! with the implementation, pruned by an antichain. The [`oracle`] module is a
//! brute-force reference used to validate the engine; [`minimise`] offers
//! divergence-preserving branching bisimulation reduction as preprocessing.

pub mod antichain;
pub mod aut;
pub mod cli;
pub mod divergence;
pub mod engine;
pub mod fixtures;
pub mod generate;
pub mod lts;
pub mod minimise;
pub mod normal;
pub mod oracle;
mod scc;

pub use antichain::{Antichain, ProductPair};
pub use aut::{parse_aut, parse_aut_with, write_aut, AutError, TauNames};
pub use divergence::{mark_divergent, DivergenceMarking};
pub use engine::{
    refines, refines_improved, refines_legacy, run_with_instrumentation, CheckError,
    ExplorationConfig, Metrics, Relation, Strategy, Variant, Verdict, WitnessKind,
};
pub use generate::{gen_ladder, gen_random, random_pair_suite, RandomLtsParams};
pub use lts::{align, Lts, LtsBuilder, StateIndex, StateSet, TAU};
pub use minimise::{dpbb_partition, minimise, quotient, Partition};
pub use normal::{NormState, Normaliser};
pub use oracle::{observe, oracle_refines, shortest_witness_distance, Observation, OracleError, WitnessDistance};
