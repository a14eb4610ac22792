#ifndef DUALSPLIT_H
#define DUALSPLIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

// Result code of every fallible call.
typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_POINTER = 1,
  DS_STATUS_DIMENSION_MISMATCH = 2,
  DS_STATUS_INVALID_ARGUMENT = 3,
  DS_STATUS_NOT_MONOTONE = 4,
  DS_STATUS_PRECONDITION = 5,
  DS_STATUS_OUT_OF_RANGE = 6,
  DS_STATUS_INTERNAL = 7,
} DsStatus;

// A maximally monotone operator represented by its resolvent.
typedef struct DsOperator DsOperator;

// An ordered operator pair `(A, B)` with its dual pair.
typedef struct DsPair DsPair;

// Iterates, shadows and residuals of one run.
typedef struct DsTrace DsTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last failure on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *ds_last_error_message(void);

// The zero operator on `R^dim`.
//
// # Safety
// `out` must be valid for writes.
enum DsStatus ds_operator_zero(size_t dim, struct DsOperator **out);

// Normal cone of the box `[lo, hi]`; infinite bounds are allowed.
//
// # Safety
// `lo` and `hi` must point to `dim` doubles; `out` must be valid for writes.
enum DsStatus ds_operator_normal_cone_box(const double *lo,
                                          const double *hi,
                                          size_t dim,
                                          struct DsOperator **out);

// Linear operator `x ↦ Mx` for a monotone `n × n` matrix in row-major order.
//
// # Safety
// `matrix` must point to `n * n` doubles; `out` must be valid for writes.
enum DsStatus ds_operator_linear(const double *matrix, size_t n, struct DsOperator **out);

// Constant operator `x ↦ u`.
//
// # Safety
// `u` must point to `dim` doubles; `out` must be valid for writes.
enum DsStatus ds_operator_constant(const double *u, size_t dim, struct DsOperator **out);

// Operator from a JSON operator description, e.g.
// `{"kind": "normal_cone_box", "lo": [0], "hi": [2]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum DsStatus ds_operator_from_json(const char *json, struct DsOperator **out);

// `A⁻¹`.
//
// # Safety
// `op` must be a live handle; `out` must be valid for writes.
enum DsStatus ds_operator_inverse(const struct DsOperator *op, struct DsOperator **out);

// `A^∨ = (−Id) ∘ A ∘ (−Id)`.
//
// # Safety
// `op` must be a live handle; `out` must be valid for writes.
enum DsStatus ds_operator_ovee(const struct DsOperator *op, struct DsOperator **out);

// `A^{−∨} = (A⁻¹)^∨`.
//
// # Safety
// `op` must be a live handle; `out` must be valid for writes.
enum DsStatus ds_operator_neg_ovee_inverse(const struct DsOperator *op, struct DsOperator **out);

// Dimension of the space, or 0 for a null handle.
//
// # Safety
// `op` must be null or a live handle.
size_t ds_operator_dim(const struct DsOperator *op);

// Declared paramonotone flag; false for a null handle.
//
// # Safety
// `op` must be null or a live handle.
bool ds_operator_is_paramonotone(const struct DsOperator *op);

// `J_A x`.
//
// # Safety
// `x` and `out` must point to `dim` doubles.
enum DsStatus ds_operator_resolvent(const struct DsOperator *op,
                                    const double *x,
                                    size_t dim,
                                    double *out);

// `R_A x = 2 J_A x − x`.
//
// # Safety
// `x` and `out` must point to `dim` doubles.
enum DsStatus ds_operator_reflected_resolvent(const struct DsOperator *op,
                                              const double *x,
                                              size_t dim,
                                              double *out);

// # Safety
// `op` must be null or a handle not yet freed.
void ds_operator_free(struct DsOperator *op);

// Pair `(A, B)`; the operators are copied, so the inputs may be freed.
//
// # Safety
// `a` and `b` must be live handles; `out` must be valid for writes.
enum DsStatus ds_pair_new(const struct DsOperator *a,
                          const struct DsOperator *b,
                          struct DsPair **out);

// The dual pair `(A⁻¹, B^{−∨})`.
//
// # Safety
// `pair` must be a live handle; `out` must be valid for writes.
enum DsStatus ds_pair_dual(const struct DsPair *pair, struct DsPair **out);

// Dimension of the space, or 0 for a null handle.
//
// # Safety
// `pair` must be null or a live handle.
size_t ds_pair_dim(const struct DsPair *pair);

// Douglas–Rachford operator `T x = J_B R_A x + x − J_A x`.
//
// # Safety
// `x` and `out` must point to `dim` doubles.
enum DsStatus ds_pair_douglas_rachford(const struct DsPair *pair,
                                       const double *x,
                                       size_t dim,
                                       double *out);

// Whether `k ∈ A z ∩ (−B z)`, within `tol`.
//
// # Safety
// `z` and `k` must point to `dim` doubles; `out` must be valid for writes.
enum DsStatus ds_pair_kz_contains(const struct DsPair *pair,
                                  const double *z,
                                  const double *k,
                                  size_t dim,
                                  double tol,
                                  bool *out);

// Splits a fixed point `x` of `T` into `z = J_A x` and `k = x − z`.
// Fails with `Precondition` if `‖T x − x‖ > tol`.
//
// # Safety
// `x`, `z_out` and `k_out` must point to `dim` doubles.
enum DsStatus ds_pair_psi_inverse(const struct DsPair *pair,
                                  const double *x,
                                  size_t dim,
                                  double tol,
                                  double *z_out,
                                  double *k_out);

// # Safety
// `pair` must be null or a handle not yet freed.
void ds_pair_free(struct DsPair *pair);

// Douglas–Rachford iteration from `x0` until `‖T xₙ − xₙ‖ ≤ tol` or
// `max_iter` steps. Not converging is not an error; see
// [`ds_trace_converged`].
//
// # Safety
// `x0` must point to `dim` doubles; `out` must be valid for writes.
enum DsStatus ds_iterate_dr(const struct DsPair *pair,
                            const double *x0,
                            size_t dim,
                            double tol,
                            size_t max_iter,
                            struct DsTrace **out);

// Number of recorded iterates (including `x0`), or 0 for a null handle.
//
// # Safety
// `trace` must be null or a live handle.
size_t ds_trace_len(const struct DsTrace *trace);

// # Safety
// `trace` must be null or a live handle.
size_t ds_trace_iterations_used(const struct DsTrace *trace);

// # Safety
// `trace` must be null or a live handle.
bool ds_trace_converged(const struct DsTrace *trace);

// Writes `xₙ` to `out`.
//
// # Safety
// `out` must point to room for the trace dimension.
enum DsStatus ds_trace_iterate(const struct DsTrace *trace, size_t n, double *out);

// Writes the shadow `J_A xₙ` to `out`.
//
// # Safety
// `out` must point to room for the trace dimension.
enum DsStatus ds_trace_shadow(const struct DsTrace *trace, size_t n, double *out);

// Writes `‖T xₙ − xₙ‖` to `out`.
//
// # Safety
// `out` must be valid for writes.
enum DsStatus ds_trace_residual(const struct DsTrace *trace, size_t n, double *out);

// # Safety
// `trace` must be null or a handle not yet freed.
void ds_trace_free(struct DsTrace *trace);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DUALSPLIT_H */
