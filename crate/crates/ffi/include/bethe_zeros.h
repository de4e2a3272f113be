#ifndef BETHE_ZEROS_H
#define BETHE_ZEROS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum BzStatus {
  BZ_STATUS_OK = 0,
  BZ_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input, domain violation or dimension mismatch.
   */
  BZ_STATUS_INVALID_ARGUMENT = 2,
  BZ_STATUS_NON_CONVERGENCE = 3,
  /**
   * Singularity, numeric instability or oracle failure.
   */
  BZ_STATUS_NUMERICAL = 4,
  BZ_STATUS_BUFFER_TOO_SMALL = 5,
  BZ_STATUS_PANIC = 6,
} BzStatus;

/**
 * A validated Bethe system or polynomial.
 */
typedef struct BzProblem BzProblem;

/**
 * Roots in decreasing order with their bounds and certificate.
 */
typedef struct BzSolution BzSolution;

typedef struct BzCertificate {
  size_t iterations;
  double grad_norm;
  double bethe_residual_max;
  bool within_bounds;
} BzCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON document (`{"system": ...}` or `{"polynomial": ...}`).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum BzStatus bz_problem_from_json(const char *json, struct BzProblem **out);

/**
 * Builds a polynomial problem. `family` is `"wilson"`, `"askey-wilson"`
 * or `"continuous-hahn"`; `params_im` may be null for real parameters.
 *
 * # Safety
 * `params_re` (and `params_im` if non-null) must point to `count` doubles.
 */
enum BzStatus bz_polynomial_new(const char *family,
                                size_t n,
                                const double *params_re,
                                const double *params_im,
                                size_t count,
                                struct BzProblem **out);

/**
 * # Safety
 * `problem` must come from this library (or be null) and not be used again.
 */
void bz_problem_free(struct BzProblem *problem);

/**
 * Number of unknowns.
 *
 * # Safety
 * `problem` must be a valid handle; `out` a valid pointer.
 */
enum BzStatus bz_problem_size(const struct BzProblem *problem, size_t *out);

/**
 * Minimizes the Morse function. `grad_tol <= 0` and `max_iters == 0` select
 * the defaults (`1e-12`, `200`).
 *
 * # Safety
 * `problem` must be a valid handle; `out` a valid pointer.
 */
enum BzStatus bz_solve(const struct BzProblem *problem,
                       double grad_tol,
                       size_t max_iters,
                       struct BzSolution **out);

/**
 * # Safety
 * `solution` must come from this library (or be null) and not be used again.
 */
void bz_solution_free(struct BzSolution *solution);

/**
 * Copies the roots (decreasing) into `buf`.
 *
 * # Safety
 * `solution` must be a valid handle and `buf` writable for `len` doubles.
 */
enum BzStatus bz_solution_roots(const struct BzSolution *solution, double *buf, size_t len);

/**
 * Coordinate lower bounds (`-INFINITY` where none is known).
 *
 * # Safety
 * As [`bz_solution_roots`].
 */
enum BzStatus bz_solution_lower(const struct BzSolution *solution, double *buf, size_t len);

/**
 * Coordinate upper bounds (`INFINITY` where none is known).
 *
 * # Safety
 * As [`bz_solution_roots`].
 */
enum BzStatus bz_solution_upper(const struct BzSolution *solution, double *buf, size_t len);

/**
 * # Safety
 * `solution` must be a valid handle; `out` a valid pointer.
 */
enum BzStatus bz_solution_certificate(const struct BzSolution *solution, struct BzCertificate *out);

/**
 * Zeros of a polynomial problem by sign scanning and bisection.
 *
 * # Safety
 * `problem` must be a valid handle and `buf` writable for `len` doubles.
 */
enum BzStatus bz_oracle_zeros(const struct BzProblem *problem, double *buf, size_t len);

/**
 * Message of the last failed call on this thread (empty after success).
 * Valid until the next call into this library on the same thread.
 */
const char *bz_last_error_message(void);

const char *bz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BETHE_ZEROS_H */
