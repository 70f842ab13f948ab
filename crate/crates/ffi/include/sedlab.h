#ifndef SEDLAB_H
#define SEDLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SedStatus {
  SED_STATUS_OK = 0,
  SED_STATUS_NULL_POINTER = 1,
  SED_STATUS_PARSE = 2,
  SED_STATUS_INVALID_ARGUMENT = 3,
  SED_STATUS_NOT_ZERO_DIVISOR = 4,
  SED_STATUS_SINGULAR_SYSTEM = 5,
  SED_STATUS_DEGENERATE = 6,
  SED_STATUS_PANIC = 7,
} SedStatus;

/**
 * Exact sedenion.
 */
typedef struct SedSedenion SedSedenion;

/**
 * Result of one great-circle transport run.
 */
typedef struct SedTrace SedTrace;

typedef struct SedInvariants {
  double d1;
  double d2;
  double d2_full;
  double delta;
} SedInvariants;

typedef struct SedTraceStep {
  size_t step;
  double t;
  double theta;
  double phi;
  double phi_unwrapped;
  double orth_err;
  double norm_err;
} SedTraceStep;

typedef struct SedLineFit {
  double slope;
  double intercept;
  double rms;
} SedLineFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *sed_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *sed_version(void);

/**
 * Parses `c0,...,c15`, `4:c0,...`, or a basis expression such as `e1+e10`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out_handle` must be writable.
 */
enum SedStatus sed_sedenion_parse(const char *text, struct SedSedenion **out_handle);

/**
 * Builds a sedenion from 16 doubles, each converted exactly.
 *
 * # Safety
 * `coeffs` must point to 16 readable doubles; `out_handle` must be writable.
 */
enum SedStatus sed_sedenion_from_doubles(const double *coeffs, struct SedSedenion **out_handle);

/**
 * # Safety
 * `handle` must come from this library and not be freed twice. Null is ignored.
 */
void sed_sedenion_free(struct SedSedenion *handle);

/**
 * Writes the 16 coefficients, rounded to double.
 *
 * # Safety
 * `handle` must be valid; `out_coeffs` must hold 16 doubles.
 */
enum SedStatus sed_sedenion_coeffs(const struct SedSedenion *handle, double *out_coeffs);

/**
 * Exact text form `4:c0,...`; free with [`sed_string_free`].
 *
 * # Safety
 * `handle` must be valid; `out_text` must be writable.
 */
enum SedStatus sed_sedenion_to_text(const struct SedSedenion *handle, char **out_text);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void sed_string_free(char *s);

/**
 * `out = a b`.
 *
 * # Safety
 * Handles must be valid; `out_handle` must be writable.
 */
enum SedStatus sed_sedenion_multiply(const struct SedSedenion *a,
                                     const struct SedSedenion *b,
                                     struct SedSedenion **out_handle);

/**
 * `D1`, `D2`, the full quartic and `det M(v)`, computed exactly then rounded.
 *
 * # Safety
 * `handle` must be valid; `out_inv` must be writable.
 */
enum SedStatus sed_invariants(const struct SedSedenion *handle, struct SedInvariants *out_inv);

/**
 * Exact zero-divisor test.
 *
 * # Safety
 * `handle` must be valid; `out_flag` must be writable.
 */
enum SedStatus sed_is_zero_divisor(const struct SedSedenion *handle, bool *out_flag);

/**
 * Exact check of `det M(v) = D1⁴ D2²` (`full_law = false`) or of the law
 * with the full quartic (`full_law = true`).
 *
 * # Safety
 * `handle` must be valid; `out_holds` must be writable.
 */
enum SedStatus sed_check_factorization(const struct SedSedenion *handle,
                                       bool full_law,
                                       bool *out_holds);

/**
 * Unit annihilator `w` (16 doubles) and `|v w|`.
 *
 * # Safety
 * `handle` must be valid; `out_w` must hold 16 doubles; `out_residual` must be writable.
 */
enum SedStatus sed_find_annihilator(const struct SedSedenion *handle,
                                    double *out_w,
                                    double *out_residual);

/**
 * Solves for the six monomial coefficients, rounded to double.
 * `target`: 0 = determinant, 1 = its square root, 2 = determinant / a⁴.
 *
 * # Safety
 * `out_coeffs` must hold 6 doubles.
 */
enum SedStatus sed_solve_coefficients(uint32_t target,
                                      bool use_reference_pairs,
                                      double *out_coeffs);

/**
 * Great-circle transport with the seeded initial frame.
 *
 * # Safety
 * `out_handle` must be writable.
 */
enum SedStatus sed_holonomy_run(size_t num_steps, uint64_t seed, struct SedTrace **out_handle);

/**
 * # Safety
 * `handle` must come from this library and not be freed twice. Null is ignored.
 */
void sed_trace_free(struct SedTrace *handle);

/**
 * Number of records (`num_steps + 1`); 0 for a null handle.
 *
 * # Safety
 * `handle` must be valid or null.
 */
size_t sed_trace_len(const struct SedTrace *handle);

/**
 * # Safety
 * `handle` must be valid; `out_step` must be writable.
 */
enum SedStatus sed_trace_step(const struct SedTrace *handle,
                              size_t index,
                              struct SedTraceStep *out_step);

/**
 * # Safety
 * `handle` must be valid; `out_fit` must be writable.
 */
enum SedStatus sed_trace_fit(const struct SedTrace *handle, struct SedLineFit *out_fit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEDLAB_H */
