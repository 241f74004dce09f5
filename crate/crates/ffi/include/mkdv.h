#ifndef MKDV_H
#define MKDV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum MkdvStatus {
  MKDV_STATUS_OK = 0,
  MKDV_STATUS_NULL_POINTER = 1,
  MKDV_STATUS_INVALID_ARGUMENT = 2,
  MKDV_STATUS_PARSE = 3,
  MKDV_STATUS_IO = 4,
  MKDV_STATUS_NUMERICAL = 5,
  MKDV_STATUS_PANIC = 6,
} MkdvStatus;

/**
 * Opaque scattering data handle.
 */
typedef struct MkdvScatteringData MkdvScatteringData;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *mkdv_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mkdv_version(void);

/**
 * Empty reflectionless data (no modes, r ≡ 0) at t = 0.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum MkdvStatus mkdv_data_new_reflectionless(struct MkdvScatteringData **out);

/**
 * Adds a soliton with eigenvalue iζ and norming constant c.
 *
 * # Safety
 * `data` must be a live handle.
 */
enum MkdvStatus mkdv_data_add_soliton(struct MkdvScatteringData *data,
                                      double zeta,
                                      double c_re,
                                      double c_im);

/**
 * Adds a breather with eigenvalue ξ + iη (ξ, η > 0) and norming constant c.
 *
 * # Safety
 * `data` must be a live handle.
 */
enum MkdvStatus mkdv_data_add_breather(struct MkdvScatteringData *data,
                                       double xi,
                                       double eta,
                                       double c_re,
                                       double c_im);

/**
 * Direct scattering of u sampled on the uniform grid x (n points) with a
 * reflection grid of `nz` nodes on [−zmax, zmax].
 *
 * # Safety
 * `x` and `u` must point to `n` doubles; `out` must be writable.
 */
enum MkdvStatus mkdv_scatter(const double *x,
                             const double *u,
                             size_t n,
                             double zmax,
                             size_t nz,
                             struct MkdvScatteringData **out);

/**
 * Parses scattering data JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MkdvStatus mkdv_data_from_json(const char *json, struct MkdvScatteringData **out);

/**
 * Serializes to JSON. Free the string with `mkdv_string_free`.
 *
 * # Safety
 * `data` must be a live handle; `out` must be writable.
 */
enum MkdvStatus mkdv_data_to_json(const struct MkdvScatteringData *data, char **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mkdv_string_free(char *s);

/**
 * # Safety
 * `data` must be NULL or a handle from this library not yet freed.
 */
void mkdv_data_free(struct MkdvScatteringData *data);

/**
 * Mode counts and the largest reflection-coefficient modulus.
 *
 * # Safety
 * `data` must be a live handle; output pointers may be NULL.
 */
enum MkdvStatus mkdv_data_summary(const struct MkdvScatteringData *data,
                                  size_t *n_solitons,
                                  size_t *n_breathers,
                                  double *max_abs_r);

/**
 * Eigenvalue and norming constant of mode `k` (solitons first, then breathers).
 *
 * # Safety
 * `data` must be a live handle; `out` must point to 4 doubles
 * (Re z, Im z, Re c, Im c).
 */
enum MkdvStatus mkdv_data_mode(const struct MkdvScatteringData *data, size_t k, double *out);

/**
 * Reflectionless profile u(x_i, t) for the discrete part of the data.
 *
 * # Safety
 * `xs` and `out` must point to `n` doubles.
 */
enum MkdvStatus mkdv_reconstruct(const struct MkdvScatteringData *data,
                                 double t,
                                 const double *xs,
                                 size_t n,
                                 double *out);

/**
 * Region I radiation value at (x, t), x < 0.
 *
 * # Safety
 * `data` must be a live handle; `out` must be writable.
 */
enum MkdvStatus mkdv_region1_generic(const struct MkdvScatteringData *data,
                                     double x,
                                     double t,
                                     double *out);

/**
 * Full long-time asymptotic profile with default region thresholds
 * scaled by `c2` and `frame_tol`.
 *
 * # Safety
 * `xs` and `out` must point to `n` doubles.
 */
enum MkdvStatus mkdv_asymptotic_profile(const struct MkdvScatteringData *data,
                                        double t,
                                        const double *xs,
                                        size_t n,
                                        double c2,
                                        double frame_tol,
                                        double *out);

/**
 * Evolves u0 (sampled at n uniform points x) with the spectral integrator on
 * a periodic box of length `l` with `nodes` Fourier modes up to `t_end`.
 * `out` receives the `nodes` samples on [−l/2, l/2) at t_end in the frame
 * moving with `velocity`.
 *
 * # Safety
 * `x` and `u` must point to `n` doubles and `out` to `nodes` doubles.
 */
enum MkdvStatus mkdv_evolve(const double *x,
                            const double *u,
                            size_t n,
                            double l,
                            size_t nodes,
                            double dt,
                            double t_end,
                            double velocity,
                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MKDV_H */
