//! Small LTSs from the literature on antichain refinement checking, used as
//! regression fixtures by the tests and the documentation.
//!
//! The same systems are available as `.aut` files under `tests/fixtures/`.

use crate::aut::parse_aut;
use crate::lts::Lts;

pub const SPEC_S0: &str = include_str!("../tests/fixtures/spec_s0.aut");
pub const IMPL_T0: &str = include_str!("../tests/fixtures/impl_t0.aut");
pub const IMPL_U0: &str = include_str!("../tests/fixtures/impl_u0.aut");
pub const INCORRECT_S0: &str = include_str!("../tests/fixtures/incorrect_s0.aut");
pub const INCORRECT_S1: &str = include_str!("../tests/fixtures/incorrect_s1.aut");
pub const INCORRECT_S2: &str = include_str!("../tests/fixtures/incorrect_s2.aut");
pub const INCORRECT_S3: &str = include_str!("../tests/fixtures/incorrect_s3.aut");
pub const VIOLATION_SPEC: &str = include_str!("../tests/fixtures/violation_spec.aut");
pub const VIOLATION_IMPL: &str = include_str!("../tests/fixtures/violation_impl.aut");

fn load(text: &str) -> Lts {
    parse_aut(text).expect("bundled fixture parses")
}

/// Cash machine specification: `req` followed by either `20` or `10 10`.
/// State indices: 0 = s0, 1 = s1, 2 = s2, 3 = s3, 4 = s5.
pub fn spec_s0() -> Lts {
    load(SPEC_S0)
}

/// `req 20` followed by a deadlock.
pub fn impl_t0() -> Lts {
    load(IMPL_T0)
}

/// `req`, then a polling τ-loop on u1 before `20`, then τ back to u0.
pub fn impl_u0() -> Lts {
    load(IMPL_U0)
}

/// Diverging root with an `a` self-loop.
pub fn incorrect_s0() -> Lts {
    load(INCORRECT_S0)
}

/// A single `b` self-loop.
pub fn incorrect_s1() -> Lts {
    load(INCORRECT_S1)
}

/// Diverging root alternating `a` with a second state.
pub fn incorrect_s2() -> Lts {
    load(INCORRECT_S2)
}

/// Diverging root with a single `a` into a deadlock.
pub fn incorrect_s3() -> Lts {
    load(INCORRECT_S3)
}

/// Specification t0 with `a` to t1 and `b` to both t1 and t2.
pub fn violation_spec() -> Lts {
    load(VIOLATION_SPEC)
}

/// Implementation s0 with `b` and `a` to s1. The `b` transition is declared
/// first so that a depth-first stack pops the `a`-successor first.
pub fn violation_impl() -> Lts {
    load(VIOLATION_IMPL)
}
