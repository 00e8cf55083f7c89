#ifndef DILATLAB_H
#define DILATLAB_H

/* Generated by cbindgen from the dilatlab-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a C ABI call.
typedef enum DlStatus {
  // The call succeeded.
  DL_STATUS_OK = 0,
  // A required pointer argument was null.
  DL_STATUS_NULL_ARGUMENT = 1,
  // Arguments were malformed or outside the supported regime.
  DL_STATUS_INVALID_ARGUMENT = 2,
  // The eigensolver, quadrature, or classifier gave up.
  DL_STATUS_SOLVER_FAILURE = 3,
  // Verification ran to completion and at least one estimate failed.
  DL_STATUS_UNSATISFIED = 4,
  // The filesystem got in the way.
  DL_STATUS_IO_FAILURE = 5,
} DlStatus;

// Opaque potential handle.
typedef struct DlPotential DlPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *dl_version(void);

// Release a string allocated by this library. Null is a no-op.
//
// # Safety
// `s` must be a pointer previously returned through an out-parameter of
// this library and not yet freed.
void dl_string_free(char *s);

// Most recent error message on this thread, as a fresh allocation the
// caller releases with `dl_string_free`. Empty after a successful call.
char *dl_last_error_message(void);

// The zero potential, giving the free operator.
struct DlPotential *dl_potential_zero(void);

// amplitude * e^(-c x^2) with Re c > 0.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum DlStatus dl_potential_gaussian(double c_re,
                                    double c_im,
                                    double amplitude,
                                    struct DlPotential **out);

// amplitude * c (1+x^2)^(-s) with s > 0.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum DlStatus dl_potential_rational(double c_re,
                                    double c_im,
                                    double s,
                                    double amplitude,
                                    struct DlPotential **out);

// Square well of the given depth on [-halfwidth, halfwidth].
//
// # Safety
// `out` must point to writable storage for one pointer.
enum DlStatus dl_potential_finite_well(double depth,
                                       double halfwidth,
                                       double amplitude,
                                       struct DlPotential **out);

// Destroy a potential handle. Null is a no-op.
//
// # Safety
// `p` must come from a constructor in this library and not be used again.
void dl_potential_free(struct DlPotential *p);

// Analyticity half-width of the dilation strip; may be infinite.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum DlStatus dl_potential_alpha(const struct DlPotential *p, double *out);

// Value of the dilated potential V(e^(i phi) x).
//
// # Safety
// `p` must be a live handle; `out_re` and `out_im` must be writable.
enum DlStatus dl_potential_evaluate(const struct DlPotential *p,
                                    double phi,
                                    double x,
                                    double *out_re,
                                    double *out_im);

// L^p norm of the dilated potential by adaptive quadrature.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum DlStatus dl_potential_norm(const struct DlPotential *p, double phi, double lp, double *out);

// Closed-form L^p norm of the unit dilated Gaussian e^(-c x^2).
//
// # Safety
// `out` must be writable.
enum DlStatus dl_gaussian_norm_closed_form(double c_re,
                                           double c_im,
                                           double phi,
                                           double lp,
                                           double *out);

// Angle minimizing the dilated Gaussian norm, for Re c > 0 > Im c.
//
// # Safety
// `out` must be writable.
enum DlStatus dl_critical_angle(double c_re, double c_im, double *out);

// Semiclassical constant pair for the exponent pair (gamma, d):
// writes L, its complex companion C, and the norm exponent p.
//
// # Safety
// `out_l`, `out_c`, and `out_p` must be writable.
enum DlStatus dl_constants(double gamma, uint32_t d, double *out_l, double *out_c, double *out_p);

// Right-hand side of the named estimate for a potential, with gamma and
// d = 1 semiclassical constants. Pass NaN for an unused kappa or phi.
//
// # Safety
// `theorem` must be a NUL-terminated string; `p` must be a live handle;
// `out` must be writable.
enum DlStatus dl_bound_rhs(const char *theorem,
                           double gamma,
                           const struct DlPotential *p,
                           double kappa,
                           double phi,
                           double *out);

// Run estimate verification for a config document and hand back the full
// report set as a JSON string (release with `dl_string_free`).
//
// Returns `Ok` when every estimate holds and `Unsatisfied` when the run
// completed but at least one failed; the JSON is written in both cases.
//
// # Safety
// `config_toml` must be a NUL-terminated string; `out_json` must point to
// writable storage for one pointer.
enum DlStatus dl_run_verify(const char *config_toml, char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DILATLAB_H */
