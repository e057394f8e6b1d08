#include <stdio.h>
#include <string.h>

#include "refinekit.h"

static const char *SPEC =
    "des (0,6,5)\n(0,\"req\",1)\n(1,\"tau\",2)\n(1,\"tau\",4)\n"
    "(4,\"20\",0)\n(2,\"10\",3)\n(3,\"10\",0)\n";
static const char *IMPL = "des (0,2,3)\n(0,\"req\",1)\n(1,\"20\",2)\n";

int main(void) {
    RkLts *spec = NULL;
    RkLts *impl = NULL;
    if (rk_lts_parse(SPEC, NULL, &spec) != RK_STATUS_OK || rk_lts_parse(IMPL, "tau", &impl) != RK_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", rk_last_error());
        return 1;
    }

    RkConfig config = rk_config_default(RK_RELATION_STABLE_FAILURES);
    RkVerdict *verdict = NULL;
    if (rk_check(spec, impl, &config, &verdict) != RK_STATUS_OK) {
        fprintf(stderr, "check: %s\n", rk_last_error());
        return 1;
    }
    char *trace = NULL;
    rk_verdict_counterexample(verdict, &trace);
    RkMetrics metrics;
    rk_verdict_metrics(verdict, &metrics);
    printf("refines=%d witness=%d counterexample=%s pairs=%llu\n", rk_verdict_refines(verdict),
           (int)rk_verdict_witness_kind(verdict), trace, (unsigned long long)metrics.pairs_done);
    int ok = !rk_verdict_refines(verdict) && rk_verdict_witness_kind(verdict) == RK_WITNESS_KIND_REFUSAL &&
             strcmp(trace, "req 20") == 0;

    rk_string_free(trace);
    rk_verdict_free(verdict);
    rk_lts_free(spec);
    rk_lts_free(impl);
    return ok ? 0 : 1;
}
