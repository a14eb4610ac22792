#include <math.h>
#include <stdio.h>

#include "dualsplit.h"

#define CHECK(call)                                                    \
    do {                                                               \
        enum DsStatus s_ = (call);                                     \
        if (s_ != DS_STATUS_OK) {                                      \
            fprintf(stderr, "%s: %d %s\n", #call, (int)s_,             \
                    ds_last_error_message());                          \
            return 1;                                                  \
        }                                                              \
    } while (0)

int main(void) {
    double lo_u = 0.0, hi_u = 2.0, lo_v = 1.0, hi_v = 3.0;
    DsOperator *a = NULL, *b = NULL;
    DsPair *pair = NULL;
    DsTrace *trace = NULL;
    CHECK(ds_operator_normal_cone_box(&lo_u, &hi_u, 1, &a));
    CHECK(ds_operator_normal_cone_box(&lo_v, &hi_v, 1, &b));
    CHECK(ds_pair_new(a, b, &pair));
    ds_operator_free(a);
    ds_operator_free(b);

    double x0 = 5.0;
    CHECK(ds_iterate_dr(pair, &x0, 1, 1e-8, 10, &trace));
    size_t n = ds_trace_len(trace);
    double last = 0.0, shadow = 0.0;
    CHECK(ds_trace_iterate(trace, n - 1, &last));
    CHECK(ds_trace_shadow(trace, n - 1, &shadow));
    printf("iterations=%zu limit=%.17g shadow=%.17g\n", ds_trace_iterations_used(trace), last, shadow);
    if (!ds_trace_converged(trace) || last != 2.0 || shadow != 2.0) {
        return 1;
    }
    if (ds_trace_iterate(trace, n, &last) != DS_STATUS_OUT_OF_RANGE) {
        return 1;
    }
    ds_trace_free(trace);
    ds_pair_free(pair);
    return 0;
}
