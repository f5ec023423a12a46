#ifndef CONFDYN_H
#define CONFDYN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CONFDYN_STATUS_OK = 0,
  CONFDYN_STATUS_NULL_POINTER = 1,
  CONFDYN_STATUS_INVALID_ARGUMENT = 2,
  CONFDYN_STATUS_NONZERO_MEAN = 3,
  CONFDYN_STATUS_SMALL_DENOMINATOR = 4,
  CONFDYN_STATUS_PRECISION_EXHAUSTED = 5,
  CONFDYN_STATUS_NOT_REAL_VALUED = 6,
  CONFDYN_STATUS_DIMENSION_MISMATCH = 7,
  CONFDYN_STATUS_SINGULAR_JACOBIAN = 8,
  CONFDYN_STATUS_DEGENERATE_CONTACT_FORM = 9,
  CONFDYN_STATUS_BUFFER_TOO_SMALL = 10,
  CONFDYN_STATUS_PANIC = 11,
} ConfdynStatus;

/**
 * Fourier coefficients indexed by frequency.
 */
typedef struct ConfdynSeries ConfdynSeries;

/**
 * An exact rotation number.
 */
typedef struct ConfdynTheta ConfdynTheta;

typedef struct {
  double max_abs;
  double slope;
  double intercept;
  /**
   * Standard error of the slope.
   */
  double residual;
  /**
   * 0 bounded coboundary candidate, 1 linear growth, 2 inconclusive.
   */
  int32_t verdict;
} ConfdynGrowthReport;

typedef struct {
  double residual;
  double factor_sum;
  /**
   * Nonzero when no tensor in the conformal class is invariant.
   */
  int32_t no_invariant_tensor;
} ConfdynVerdict;

/**
 * Static, NUL-terminated description of a status code.
 */
const char *confdyn_status_message(ConfdynStatus status);

/**
 * Empty series.
 */
ConfdynSeries *confdyn_series_new(void);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void confdyn_series_free(ConfdynSeries *s);

/**
 * Sets the coefficient of frequency `n`.
 *
 * # Safety
 * `s` must be a live series handle.
 */
ConfdynStatus confdyn_series_set(ConfdynSeries *s, int64_t n, double re, double im);

/**
 * Sets frequency `n > 0` to `re + i im` and `-n` to its conjugate.
 *
 * # Safety
 * `s` must be a live series handle.
 */
ConfdynStatus confdyn_series_set_real(ConfdynSeries *s, int64_t n, double re, double im);

/**
 * Number of stored coefficients.
 *
 * # Safety
 * `s` must be a live series handle or null (which yields 0).
 */
size_t confdyn_series_len(const ConfdynSeries *s);

/**
 * The `index`-th stored coefficient in increasing frequency order.
 *
 * # Safety
 * `s` must be a live series handle; output pointers must be writable.
 */
ConfdynStatus confdyn_series_get(const ConfdynSeries *s,
                                 size_t index,
                                 int64_t *n,
                                 double *re,
                                 double *im);

/**
 * Value of a real series at angle `t`.
 *
 * # Safety
 * `s` must be a live series handle; `value` must be writable.
 */
ConfdynStatus confdyn_series_evaluate(const ConfdynSeries *s, double t, double *value);

/**
 * Wraps `theta` in `(0, 1)`.
 *
 * # Safety
 * `theta_out` must be writable.
 */
ConfdynStatus confdyn_theta_from_f64(double theta, ConfdynTheta **theta_out);

/**
 * `(sqrt(5) - 1) / 2`.
 */
ConfdynTheta *confdyn_theta_golden(void);

/**
 * Nearest double to `theta`, or NaN for null.
 *
 * # Safety
 * `theta` must be a live handle or null.
 */
double confdyn_theta_to_f64(const ConfdynTheta *theta);

/**
 * # Safety
 * `theta` must come from this library and not be used afterwards. Null is ignored.
 */
void confdyn_theta_free(ConfdynTheta *theta);

/**
 * Solves `g - g o R_theta = f`; `g_out` receives a new series handle.
 *
 * # Safety
 * Handles must be live; `g_out` must be writable.
 */
ConfdynStatus confdyn_coboundary_solve(const ConfdynSeries *f,
                                       const ConfdynTheta *theta,
                                       double denom_floor,
                                       ConfdynSeries **g_out);

/**
 * Writes `S_1 f(x0), ..., S_count f(x0)` into `sums`, which must hold `capacity >= count`.
 *
 * # Safety
 * Handles must be live; `sums` must point to `capacity` writable doubles.
 */
ConfdynStatus confdyn_birkhoff_sums(const ConfdynSeries *f,
                                    const ConfdynTheta *theta,
                                    double x0,
                                    size_t count,
                                    double *sums,
                                    size_t capacity);

/**
 * Bounded-versus-linear classification of `count` Birkhoff sums.
 *
 * # Safety
 * Handles must be live; `report` must be writable.
 */
ConfdynStatus confdyn_gh_test(const ConfdynSeries *f,
                              const ConfdynTheta *theta,
                              double x0,
                              size_t count,
                              double bound,
                              ConfdynGrowthReport *report);

/**
 * Liouville-type `theta` with certified frequencies `n_1 < ... < n_levels` written to
 * `frequencies` (capacity `levels`). `precision_bits = 0` selects the minimum budget.
 *
 * # Safety
 * `theta_out` must be writable; `frequencies` must hold `levels` values.
 */
ConfdynStatus confdyn_liouville_theta(uint32_t levels,
                                      uint64_t precision_bits,
                                      ConfdynTheta **theta_out,
                                      int64_t *frequencies);

/**
 * The truncated smooth `f` and continuous `g` with `g - g o R_theta = f` for the
 * Liouville `theta` of [`confdyn_liouville_theta`].
 *
 * # Safety
 * All output pointers must be writable.
 */
ConfdynStatus confdyn_counterexample_pair(uint32_t levels,
                                          uint64_t precision_bits,
                                          ConfdynSeries **f_out,
                                          ConfdynSeries **g_out,
                                          ConfdynTheta **theta_out);

/**
 * Pullback check of a named model flow (`H`, `F`, `liouville`, `volume`, `reeb`) at
 * `samples` seeded points with the default tolerance for its Jacobian mode.
 *
 * # Safety
 * `name` must be a NUL-terminated string; outputs must be writable.
 */
ConfdynStatus confdyn_flow_verify(const char *name,
                                  size_t n,
                                  double t,
                                  size_t samples,
                                  uint64_t seed,
                                  double *max_residual,
                                  int32_t *pass);

/**
 * Orbit-sum obstruction check for the time-`t` map of a named model flow at `point`.
 * `torus != 0` measures the return distance mod 1.
 *
 * # Safety
 * `name` must be NUL-terminated; `point` must hold `dim` doubles; `verdict` writable.
 */
ConfdynStatus confdyn_criterion_check(const char *name,
                                      size_t n,
                                      double t,
                                      const double *point,
                                      size_t dim,
                                      size_t m,
                                      double point_tol,
                                      double factor_tol,
                                      int32_t torus,
                                      ConfdynVerdict *verdict);

/**
 * Average of `e^{2f}` on the contact 3-torus for `f` sampled on an `n1 x n2 x n3`
 * grid (row-major, `z` fastest). `violated` is set when `|A - 1| > tol`.
 *
 * # Safety
 * `values` must hold `n1 n2 n3` doubles; outputs must be writable.
 */
ConfdynStatus confdyn_average_check(const double *values,
                                    size_t n1,
                                    size_t n2,
                                    size_t n3,
                                    double tol,
                                    double *average,
                                    int32_t *violated);

#endif  /* CONFDYN_H */
