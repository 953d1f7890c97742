#ifndef GIBBS_H
#define GIBBS_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values 1 to 4 match the exit codes of the `gibbs` binary.
 */
typedef enum GibbsStatus {
  GIBBS_STATUS_OK = 0,
  GIBBS_STATUS_CONFIG = 1,
  GIBBS_STATUS_FIELD_SPEC = 2,
  GIBBS_STATUS_EXPRESSION = 3,
  GIBBS_STATUS_CHECK_FAILED = 4,
  GIBBS_STATUS_NULL_POINTER = 5,
  GIBBS_STATUS_INVALID_UTF8 = 6,
  GIBBS_STATUS_PANIC = 7,
} GibbsStatus;

/**
 * A vector field, differentiated exactly or by central differences.
 */
typedef struct GibbsField GibbsField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a polynomial field spec. `fd_step` of 0 selects exact
 * derivatives; a positive value selects central differences with that
 * step. On success `*out` receives a handle to free with
 * [`gibbs_field_free`].
 *
 * # Safety
 * `json` must be NULL or a NUL-terminated string; `out` must be NULL or
 * writable.
 */
enum GibbsStatus gibbs_field_from_json(const char *json, double fd_step, struct GibbsField **out);

/**
 * Releases a field handle. NULL is ignored.
 *
 * # Safety
 * `field` must be NULL or a handle from [`gibbs_field_from_json`] that has
 * not been freed.
 */
void gibbs_field_free(struct GibbsField *field);

/**
 * Writes `∇⊗v` (row `i` holds `∂v/∂x_i`) at `point[3]` into `out[9]`.
 *
 * # Safety
 * `field` must be a live handle; `point` must hold 3 doubles and `out` 9.
 */
enum GibbsStatus gibbs_grad_gibbs(const struct GibbsField *field, const double *point, double *out);

/**
 * Writes the transpose `(∇⊗v)†` at `point[3]` into `out[9]`.
 *
 * # Safety
 * As for [`gibbs_grad_gibbs`].
 */
enum GibbsStatus gibbs_grad_alt(const struct GibbsField *field, const double *point, double *out);

/**
 * Writes the strain-rate tensor `d` into `d_out[9]` and the rotation
 * tensor `Ω` into `omega_out[9]`.
 *
 * # Safety
 * `field` must be a live handle; `point` must hold 3 doubles and each
 * output 9.
 */
enum GibbsStatus gibbs_decompose(const struct GibbsField *field,
                                 const double *point,
                                 double *d_out,
                                 double *omega_out);

/**
 * Writes the kinematics report at `point[3]` as a JSON string.
 *
 * # Safety
 * `field` must be a live handle, `point` must hold 3 doubles, `out` must
 * be writable.
 */
enum GibbsStatus gibbs_report_json(const struct GibbsField *field, const double *point, char **out);

/**
 * Evaluates a notation expression at `point[3]` and writes
 * `{"kind": ..., "value": ...}` as JSON. `names[k]` is bound to the vector
 * `values[3k..3k+3]` for `k < count`; the arrays may be NULL when `count`
 * is 0. On an expression error the last-error message ends with the
 * character position of the failure.
 *
 * # Safety
 * `field` must be a live handle, `point` must hold 3 doubles, `expr` must
 * be NUL-terminated, `names` must hold `count` NUL-terminated strings and
 * `values` `3 * count` doubles, `out` must be writable.
 */
enum GibbsStatus gibbs_eval_expr_json(const struct GibbsField *field,
                                      const double *point,
                                      const char *expr,
                                      const char *const *names,
                                      const double *values,
                                      size_t count,
                                      char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library that has not been freed.
 */
void gibbs_string_free(char *s);

/**
 * Geometric product of two multivectors with coefficients in the order
 * `1, e1, e2, e3, e12, e13, e23, e123`.
 *
 * # Safety
 * `a` and `b` must hold 8 doubles; `out` must hold 8 and may alias either
 * input.
 */
enum GibbsStatus gibbs_mv_geometric_product(const double *a, const double *b, double *out);

/**
 * Runs the seeded identity suite. Returns `GIBBS_STATUS_CHECK_FAILED` if any
 * check fails; counts are written either way.
 *
 * # Safety
 * `passed` and `failed` must be NULL or writable.
 */
enum GibbsStatus gibbs_check(uint64_t seed, uint32_t *passed, uint32_t *failed);

/**
 * Message for the last failure on this thread, or NULL after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *gibbs_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GIBBS_H */
