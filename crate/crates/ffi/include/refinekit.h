#ifndef REFINEKIT_H
#define REFINEKIT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes of the C API.
typedef enum RkStatus {
  RK_STATUS_OK = 0,
  RK_STATUS_NULL_POINTER = 1,
  RK_STATUS_INVALID_UTF8 = 2,
  RK_STATUS_PARSE_ERROR = 3,
  RK_STATUS_IO_ERROR = 4,
  RK_STATUS_INVALID_ARGUMENT = 5,
  // The legacy failures-divergences check was requested without
  // `allow_unsound_legacy_fdr`.
  RK_STATUS_UNSOUND_LEGACY_FDR = 6,
  RK_STATUS_BUDGET_EXCEEDED = 7,
  RK_STATUS_ORACLE_TOO_LARGE = 8,
  RK_STATUS_PANIC = 9,
} RkStatus;

typedef enum RkWitnessKind {
  // The refinement holds.
  RK_WITNESS_KIND_NONE = 0,
  RK_WITNESS_KIND_EMPTY_SPEC = 1,
  RK_WITNESS_KIND_REFUSAL = 2,
  RK_WITNESS_KIND_DIVERGENCE = 3,
} RkWitnessKind;

typedef enum RkRelation {
  RK_RELATION_TRACE = 0,
  RK_RELATION_STABLE_FAILURES = 1,
  RK_RELATION_FAILURES_DIVERGENCES = 2,
} RkRelation;

typedef enum RkStrategy {
  RK_STRATEGY_DEPTH_FIRST = 0,
  RK_STRATEGY_BREADTH_FIRST = 1,
} RkStrategy;

typedef enum RkVariant {
  RK_VARIANT_IMPROVED = 0,
  RK_VARIANT_LEGACY = 1,
} RkVariant;

// An LTS handle.
typedef struct RkLts RkLts;

// The outcome of [`rk_check`].
typedef struct RkVerdict RkVerdict;

// Options of one check. The enumeration fields hold `RkRelation`,
// `RkStrategy` and `RkVariant` values; out-of-range values are rejected with
// `InvalidArgument`.
typedef struct RkConfig {
  uint32_t relation;
  uint32_t strategy;
  uint32_t variant;
  bool allow_unsound_legacy_fdr;
  // Maximum number of pushed pairs; 0 means unlimited.
  uint64_t node_budget;
} RkConfig;

typedef struct RkMetrics {
  uint64_t working_max;
  uint64_t antichain_hits;
  uint64_t antichain_misses;
  uint64_t antichain_max;
  uint64_t pairs_done;
} RkMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default options: improved depth-first check of `relation` (an
// `RkRelation` value), no budget.
struct RkConfig rk_config_default(uint32_t relation);

// Parses `.aut` text. `tau` names the internal action; NULL or "" selects
// "tau". The label "i" is always internal.
//
// # Safety
// `text` and `tau` are NULL or NUL-terminated strings; `out` is NULL or
// writable.
enum RkStatus rk_lts_parse(const char *text, const char *tau, struct RkLts **out);

// Reads and parses an `.aut` file; `tau` as for [`rk_lts_parse`].
//
// # Safety
// As for [`rk_lts_parse`].
enum RkStatus rk_lts_read_file(const char *path, const char *tau, struct RkLts **out);

// The ladder benchmark LTS with `n` rungs of `k` actions each.
//
// # Safety
// `out` is NULL or writable.
enum RkStatus rk_lts_ladder(size_t n, size_t k, struct RkLts **out);

// Number of states, 0 for NULL.
//
// # Safety
// `lts` is NULL or a live handle.
size_t rk_lts_num_states(const struct RkLts *lts);

// Number of transitions, 0 for NULL.
//
// # Safety
// `lts` is NULL or a live handle.
size_t rk_lts_num_transitions(const struct RkLts *lts);

// # Safety
// `lts` is NULL or a handle not yet freed.
void rk_lts_free(struct RkLts *lts);

// Checks whether `impl_` refines `spec`. A NULL `config` selects
// [`rk_config_default`] for trace refinement.
//
// # Safety
// `spec` and `impl_` are live handles, `config` is NULL or readable and
// `out` is NULL or writable.
enum RkStatus rk_check(const struct RkLts *spec,
                       const struct RkLts *impl_,
                       const struct RkConfig *config,
                       struct RkVerdict **out);

// False for NULL.
//
// # Safety
// `verdict` is NULL or a live handle.
bool rk_verdict_refines(const struct RkVerdict *verdict);

// # Safety
// `verdict` is NULL or a live handle.
enum RkWitnessKind rk_verdict_witness_kind(const struct RkVerdict *verdict);

// Product steps to the witness including internal steps, or -1 when the
// refinement holds.
//
// # Safety
// `verdict` is NULL or a live handle.
int64_t rk_verdict_witness_depth(const struct RkVerdict *verdict);

// # Safety
// `verdict` is NULL or a live handle; `out` is NULL or writable.
enum RkStatus rk_verdict_metrics(const struct RkVerdict *verdict, struct RkMetrics *out);

// The visible counterexample as space-separated labels, or NULL in `*out`
// when the refinement holds. Release the string with [`rk_string_free`].
//
// # Safety
// `verdict` is NULL or a live handle; `out` is NULL or writable.
enum RkStatus rk_verdict_counterexample(const struct RkVerdict *verdict, char **out);

// # Safety
// `s` is NULL or a string returned by this library and not yet freed.
void rk_string_free(char *s);

// # Safety
// `verdict` is NULL or a handle not yet freed.
void rk_verdict_free(struct RkVerdict *verdict);

// Decides the refinement with the brute-force oracle. Fails with
// `OracleTooLarge` when the inputs exceed its budget.
//
// # Safety
// `spec` and `impl_` are live handles; `out` is NULL or writable.
enum RkStatus rk_oracle_refines(const struct RkLts *spec,
                                const struct RkLts *impl_,
                                uint32_t relation,
                                bool *out);

// Description of the last failure on this thread, or NULL after a
// successful call. Valid until the next call into this library on the same
// thread.
const char *rk_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFINEKIT_H */
