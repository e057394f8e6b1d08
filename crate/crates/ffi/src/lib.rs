//! C ABI for refinekit.
//!
//! Every fallible function returns an [`RkStatus`]; on failure a description
//! is available from [`rk_last_error`] on the same thread. Objects are
//! opaque handles owned by the caller and released with the matching
//! `*_free` function. Panics never cross the boundary: they are reported as
//! [`RkStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use refinekit::aut::{parse_aut_with, read_aut, TauNames};
use refinekit::engine::{refines, CheckError, ExplorationConfig, Relation, Strategy, Variant, Verdict, WitnessKind};
use refinekit::oracle::oracle_refines;
use refinekit::{gen_ladder, Lts};

/// Result codes of the C API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IoError = 4,
    InvalidArgument = 5,
    /// The legacy failures-divergences check was requested without
    /// `allow_unsound_legacy_fdr`.
    UnsoundLegacyFdr = 6,
    BudgetExceeded = 7,
    OracleTooLarge = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkRelation {
    Trace = 0,
    StableFailures = 1,
    FailuresDivergences = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkStrategy {
    DepthFirst = 0,
    BreadthFirst = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkVariant {
    Improved = 0,
    Legacy = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkWitnessKind {
    /// The refinement holds.
    None = 0,
    EmptySpec = 1,
    Refusal = 2,
    Divergence = 3,
}

/// Options of one check. The enumeration fields hold `RkRelation`,
/// `RkStrategy` and `RkVariant` values; out-of-range values are rejected with
/// `InvalidArgument`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RkConfig {
    pub relation: u32,
    pub strategy: u32,
    pub variant: u32,
    pub allow_unsound_legacy_fdr: bool,
    /// Maximum number of pushed pairs; 0 means unlimited.
    pub node_budget: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RkMetrics {
    pub working_max: u64,
    pub antichain_hits: u64,
    pub antichain_misses: u64,
    pub antichain_max: u64,
    pub pairs_done: u64,
}

/// An LTS handle.
pub struct RkLts(Lts);

/// The outcome of [`rk_check`].
pub struct RkVerdict(Verdict);

type Failure = (RkStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).expect("interior NULs were replaced"));
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

/// Runs `body`, converting errors and panics into a status and the thread's
/// last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RkStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|panic| {
        let message = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".to_string());
        Err((RkStatus::Panic, format!("panic: {message}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            RkStatus::Ok
        }
        Err((status, message)) => {
            set_last_error(Some(message));
            status
        }
    }
}

fn null(what: &str) -> Failure {
    (RkStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` is NULL or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (RkStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `p` is NULL or points to a live `T`.
unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn tau_names(tau: &str) -> TauNames {
    if tau.is_empty() {
        TauNames::default()
    } else {
        TauNames::new(tau)
    }
}

fn relation(value: u32) -> Result<Relation, Failure> {
    match value {
        0 => Ok(Relation::Trace),
        1 => Ok(Relation::StableFailures),
        2 => Ok(Relation::FailuresDivergences),
        _ => Err((RkStatus::InvalidArgument, format!("unknown relation {value}"))),
    }
}

fn config(c: &RkConfig) -> Result<ExplorationConfig, Failure> {
    let strategy = match c.strategy {
        0 => Strategy::DepthFirst,
        1 => Strategy::BreadthFirst,
        v => return Err((RkStatus::InvalidArgument, format!("unknown strategy {v}"))),
    };
    let variant = match c.variant {
        0 => Variant::Improved,
        1 => Variant::Legacy,
        v => return Err((RkStatus::InvalidArgument, format!("unknown variant {v}"))),
    };
    Ok(ExplorationConfig {
        relation: relation(c.relation)?,
        strategy,
        variant,
        invariant_checks: false,
        allow_unsound_legacy_fdr: c.allow_unsound_legacy_fdr,
        node_budget: (c.node_budget != 0).then_some(c.node_budget),
    })
}

fn store<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for NULL before doing any work.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Default options: improved depth-first check of `relation` (an
/// `RkRelation` value), no budget.
#[no_mangle]
pub extern "C" fn rk_config_default(relation: u32) -> RkConfig {
    RkConfig {
        relation,
        strategy: RkStrategy::DepthFirst as u32,
        variant: RkVariant::Improved as u32,
        allow_unsound_legacy_fdr: false,
        node_budget: 0,
    }
}

/// Parses `.aut` text. `tau` names the internal action; NULL or "" selects
/// "tau". The label "i" is always internal.
///
/// # Safety
/// `text` and `tau` are NULL or NUL-terminated strings; `out` is NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rk_lts_parse(text: *const c_char, tau: *const c_char, out: *mut *mut RkLts) -> RkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(text, "text")?;
        let tau = if tau.is_null() { "" } else { str_arg(tau, "tau")? };
        let lts = parse_aut_with(text, &tau_names(tau)).map_err(|e| (RkStatus::ParseError, e.to_string()))?;
        store(out, RkLts(lts));
        Ok(())
    })
}

/// Reads and parses an `.aut` file; `tau` as for [`rk_lts_parse`].
///
/// # Safety
/// As for [`rk_lts_parse`].
#[no_mangle]
pub unsafe extern "C" fn rk_lts_read_file(path: *const c_char, tau: *const c_char, out: *mut *mut RkLts) -> RkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        let tau = if tau.is_null() { "" } else { str_arg(tau, "tau")? };
        let lts = read_aut(Path::new(path), &tau_names(tau))
            .map_err(|e| (RkStatus::IoError, format!("{path}: {e}")))?
            .map_err(|e| (RkStatus::ParseError, format!("{path}: {e}")))?;
        store(out, RkLts(lts));
        Ok(())
    })
}

/// The ladder benchmark LTS with `n` rungs of `k` actions each.
///
/// # Safety
/// `out` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_lts_ladder(n: usize, k: usize, out: *mut *mut RkLts) -> RkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n == 0 || k == 0 {
            return Err((RkStatus::InvalidArgument, "ladder needs n >= 1 and k >= 1".to_string()));
        }
        store(out, RkLts(gen_ladder(n, k)));
        Ok(())
    })
}

/// Number of states, 0 for NULL.
///
/// # Safety
/// `lts` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_lts_num_states(lts: *const RkLts) -> usize {
    lts.as_ref().map_or(0, |l| l.0.num_states())
}

/// Number of transitions, 0 for NULL.
///
/// # Safety
/// `lts` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_lts_num_transitions(lts: *const RkLts) -> usize {
    lts.as_ref().map_or(0, |l| l.0.num_transitions())
}

/// # Safety
/// `lts` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rk_lts_free(lts: *mut RkLts) {
    if !lts.is_null() {
        drop(Box::from_raw(lts));
    }
}

/// Checks whether `impl_` refines `spec`. A NULL `config` selects
/// [`rk_config_default`] for trace refinement.
///
/// # Safety
/// `spec` and `impl_` are live handles, `config` is NULL or readable and
/// `out` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_check(
    spec: *const RkLts,
    impl_: *const RkLts,
    config: *const RkConfig,
    out: *mut *mut RkVerdict,
) -> RkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ref_arg(spec, "spec")?;
        let impl_ = ref_arg(impl_, "impl")?;
        let raw = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| rk_config_default(RkRelation::Trace as u32));
        let config = self::config(&raw)?;
        let verdict = refines(&spec.0, &impl_.0, &config).map_err(|e| match e {
            CheckError::UnsoundLegacyFdr => (RkStatus::UnsoundLegacyFdr, e.to_string()),
            CheckError::BudgetExceeded(_) => (RkStatus::BudgetExceeded, e.to_string()),
        })?;
        store(out, RkVerdict(verdict));
        Ok(())
    })
}

/// False for NULL.
///
/// # Safety
/// `verdict` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_verdict_refines(verdict: *const RkVerdict) -> bool {
    verdict.as_ref().is_some_and(|v| v.0.refines)
}

/// # Safety
/// `verdict` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_verdict_witness_kind(verdict: *const RkVerdict) -> RkWitnessKind {
    match verdict.as_ref().and_then(|v| v.0.witness_kind) {
        None => RkWitnessKind::None,
        Some(WitnessKind::EmptySpec) => RkWitnessKind::EmptySpec,
        Some(WitnessKind::Refusal) => RkWitnessKind::Refusal,
        Some(WitnessKind::Divergence) => RkWitnessKind::Divergence,
    }
}

/// Product steps to the witness including internal steps, or -1 when the
/// refinement holds.
///
/// # Safety
/// `verdict` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_verdict_witness_depth(verdict: *const RkVerdict) -> i64 {
    verdict
        .as_ref()
        .and_then(|v| v.0.witness_depth)
        .map_or(-1, |d| d as i64)
}

/// # Safety
/// `verdict` is NULL or a live handle; `out` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_verdict_metrics(verdict: *const RkVerdict, out: *mut RkMetrics) -> RkStatus {
    guard(|| {
        let verdict = ref_arg(verdict, "verdict")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = verdict.0.metrics;
        *out = RkMetrics {
            working_max: m.working_max,
            antichain_hits: m.antichain_hits,
            antichain_misses: m.antichain_misses,
            antichain_max: m.antichain_max,
            pairs_done: m.pairs_done,
        };
        Ok(())
    })
}

/// The visible counterexample as space-separated labels, or NULL in `*out`
/// when the refinement holds. Release the string with [`rk_string_free`].
///
/// # Safety
/// `verdict` is NULL or a live handle; `out` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_verdict_counterexample(verdict: *const RkVerdict, out: *mut *mut c_char) -> RkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let verdict = ref_arg(verdict, "verdict")?;
        *out = match &verdict.0.counterexample {
            None => ptr::null_mut(),
            Some(trace) => CString::new(trace.join(" "))
                .map_err(|e| (RkStatus::InvalidArgument, e.to_string()))?
                .into_raw(),
        };
        Ok(())
    })
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `verdict` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rk_verdict_free(verdict: *mut RkVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Decides the refinement with the brute-force oracle. Fails with
/// `OracleTooLarge` when the inputs exceed its budget.
///
/// # Safety
/// `spec` and `impl_` are live handles; `out` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_oracle_refines(
    spec: *const RkLts,
    impl_: *const RkLts,
    relation: u32,
    out: *mut bool,
) -> RkStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let spec = ref_arg(spec, "spec")?;
        let impl_ = ref_arg(impl_, "impl")?;
        let relation = self::relation(relation)?;
        *out = oracle_refines(&spec.0, &impl_.0, relation).map_err(|e| (RkStatus::OracleTooLarge, e.to_string()))?;
        Ok(())
    })
}

/// Description of the last failure on this thread, or NULL after a
/// successful call. Valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn rk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
