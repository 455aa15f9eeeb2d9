#ifndef UWOC_H
#define UWOC_H

#pragma once

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UwocStatus {
  UWOC_STATUS_OK = 0,
  UWOC_STATUS_NULL_POINTER = 1,
  UWOC_STATUS_INVALID_ARGUMENT = 2,
  UWOC_STATUS_NUMERICAL = 3,
  UWOC_STATUS_SIMULATION = 4,
  UWOC_STATUS_PANIC = 5,
} UwocStatus;

typedef enum UwocScheme {
  UWOC_SCHEME_MRC_EXACT_SUM = 0,
  UWOC_SCHEME_SC_MAX = 1,
  UWOC_SCHEME_GEOMETRIC_MEAN = 2,
  UWOC_SCHEME_N_TIMES_GEOMETRIC_MEAN = 3,
  UWOC_SCHEME_SINGLE = 4,
} UwocScheme;

/**
 * Identically distributed apertures sharing one average SNR.
 */
typedef struct UwocArray UwocArray;

typedef struct UwocEggParams {
  double omega;
  double lambda;
  double a;
  double b;
  double c;
} UwocEggParams;

typedef struct UwocPointing {
  double a0;
  double rho;
} UwocPointing;

/**
 * Monte Carlo outage estimate with its 99% Wilson interval.
 */
typedef struct UwocEstimate {
  double p_hat;
  double ci_low;
  double ci_high;
  uint64_t trials;
  uint64_t count;
} UwocEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *uwoc_version(void);

/**
 * Message of the last failed call on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *uwoc_last_error(void);

/**
 * Reference turbulence parameters.
 */
struct UwocEggParams uwoc_egg_reference(void);

/**
 * Named pointing preset: "significant", "strong" or "negligible".
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum UwocStatus uwoc_pointing_preset(const char *name, struct UwocPointing *out);

/**
 * Average SNR γ₀ of the reference link at transmit power `pt_dbm`.
 *
 * # Safety
 * `out` must be writable.
 */
enum UwocStatus uwoc_reference_gamma0(double pt_dbm, double *out);

/**
 * Single-aperture SNR CDF at `gamma` for average SNR `g0`.
 *
 * # Safety
 * `egg_params` and `pe` must be readable, `out` writable.
 */
enum UwocStatus uwoc_single_cdf(double gamma,
                                const struct UwocEggParams *egg_params,
                                const struct UwocPointing *pe,
                                double g0,
                                double *out);

/**
 * New array of `n` identical apertures at average SNR `g0`.
 *
 * # Safety
 * `egg_params` and `pe` must be readable, `out` writable. On success `*out` owns a
 * handle to be released with [`uwoc_array_free`].
 */
enum UwocStatus uwoc_array_new_iid(size_t n,
                                   const struct UwocEggParams *egg_params,
                                   const struct UwocPointing *pe,
                                   double g0,
                                   struct UwocArray **out);

/**
 * Changes the array's average SNR.
 *
 * # Safety
 * `arr` must be a live handle from [`uwoc_array_new_iid`].
 */
enum UwocStatus uwoc_array_set_g0(struct UwocArray *arr, double g0);

/**
 * Number of apertures, or 0 for a null handle.
 *
 * # Safety
 * `arr` must be null or a live handle.
 */
size_t uwoc_array_len(const struct UwocArray *arr);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `arr` must be null or a live handle not used afterwards.
 */
void uwoc_array_free(struct UwocArray *arr);

/**
 * MRC outage bound `P(N γ_N ≤ γ_th)` under the default convention.
 *
 * # Safety
 * `arr` must be a live handle, `out` writable.
 */
enum UwocStatus uwoc_mrc_outage(const struct UwocArray *arr, double gamma_th, double *out);

/**
 * Exact selection-combining outage at `gamma_th`.
 *
 * # Safety
 * `arr` must be a live handle, `out` writable.
 */
enum UwocStatus uwoc_sc_outage(const struct UwocArray *arr, double gamma_th, double *out);

/**
 * Monte Carlo outage of `scheme` at `gamma_th`. Results depend only on
 * `seed` and `trials`, not on `workers`.
 *
 * # Safety
 * `arr` must be a live handle, `out` writable.
 */
enum UwocStatus uwoc_simulate_outage(const struct UwocArray *arr,
                                     enum UwocScheme scheme,
                                     double gamma_th,
                                     uint64_t trials,
                                     uint64_t seed,
                                     size_t workers,
                                     struct UwocEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UWOC_H */
