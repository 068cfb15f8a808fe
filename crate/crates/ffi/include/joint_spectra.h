/* C interface to the joint-spectra library. */

#ifndef JOINT_SPECTRA_H
#define JOINT_SPECTRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every API call.
typedef enum JspStatus {
  // Success; out parameters are valid.
  JSP_STATUS_OK = 0,
  // A required pointer argument was null.
  JSP_STATUS_NULL_POINTER = 1,
  // An argument was outside the function's domain.
  JSP_STATUS_INVALID_ARGUMENT = 2,
  // A matrix was numerically singular.
  JSP_STATUS_SINGULAR_MATRIX = 3,
  // Path samples are too coarse for argument tracking.
  JSP_STATUS_SAMPLE_TOO_COARSE = 4,
  // The path passes through or too near zero.
  JSP_STATUS_PATH_HITS_ZERO = 5,
  // Requested tree level exceeds the library cap.
  JSP_STATUS_LEVEL_TOO_LARGE = 6,
  // The evaluation point is a pole of a summand.
  JSP_STATUS_POLE_AT_NODE = 7,
  // The point lies in the joint spectrum.
  JSP_STATUS_POINT_IN_SPECTRUM = 8,
  // 4 - mu^2 is too small for the renormalization identity.
  JSP_STATUS_RENORMALIZATION_POLE = 9,
  // A dynamical map was evaluated at one of its poles.
  JSP_STATUS_POLE_OF_MAP = 10,
  // The library panicked; treat the out parameters as garbage.
  JSP_STATUS_INTERNAL_ERROR = 11,
} JspStatus;

// Closed sampled path in the two slice coordinates; opaque to C.
typedef struct JspPath JspPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *jsp_version(void);

// Fuglede-Kadison determinant of 1 - z1 a - z2 t in closed form.
//
// # Safety
// `out` must point to a writable double.
enum JspStatus jsp_fk_det_closed(double z1_re,
                                 double z1_im,
                                 double z2_re,
                                 double z2_im,
                                 double *out);

// Fuglede-Kadison determinant by adaptive quadrature.
//
// `out_converged` reports whether the doubling ladder met `abs_tol`; the
// value is the last estimate either way.
//
// # Safety
// `out_value` and `out_converged` must point to writable storage.
enum JspStatus jsp_fk_det_quadrature(double z1_re,
                                     double z1_im,
                                     double z2_re,
                                     double z2_im,
                                     uint32_t initial_panels,
                                     double abs_tol,
                                     uint32_t max_doublings,
                                     double *out_value,
                                     bool *out_converged);

// Normalized resolvent trace of 1 - z1 a - z2 t, off the spectrum only.
//
// # Safety
// `out_re` and `out_im` must point to writable doubles.
enum JspStatus jsp_trace_resolvent(double z1_re,
                                   double z1_im,
                                   double z2_re,
                                   double z2_im,
                                   double *out_re,
                                   double *out_im);

// Normalized trace of the inverted D_n pencil via the closed n-term sum.
//
// # Safety
// `out_re` and `out_im` must point to writable doubles.
enum JspStatus jsp_dn_trace_resolvent(double z0_re,
                                      double z0_im,
                                      double z1_re,
                                      double z1_im,
                                      double z2_re,
                                      double z2_im,
                                      uint64_t n,
                                      double *out_re,
                                      double *out_im);

// Membership of (z0, z1, z2) in the dihedral joint spectrum quadric.
//
// # Safety
// `out` must point to a writable bool.
enum JspStatus jsp_in_spectrum_dinf(double z0_re,
                                    double z0_im,
                                    double z1_re,
                                    double z1_im,
                                    double z2_re,
                                    double z2_im,
                                    double tol,
                                    bool *out);

// Mahler measure of a polynomial given as `coeff_count` interleaved
// re/im coefficient pairs in ascending degree.
//
// # Safety
// `coeffs` must point to `2 * coeff_count` readable doubles and `out` to
// a writable double.
enum JspStatus jsp_mahler_measure(const double *coeffs, uint64_t coeff_count, double *out);

// One step of the renormalization map F(lambda, mu); fails on the pole
// mu^2 = 4. `out` receives lambda'_re, lambda'_im, mu'_re, mu'_im.
//
// # Safety
// `out` must point to 4 writable doubles.
enum JspStatus jsp_map_f(double lambda_re,
                         double lambda_im,
                         double mu_re,
                         double mu_im,
                         double *out);

// One step of the polynomial branch map F1 on (z0, z1, z2).
//
// # Safety
// `z` must point to 6 readable doubles and `out` to 6 writable doubles.
enum JspStatus jsp_map_f1(const double *z, double *out);

// Residuals of the level-n determinant identities at (lambda, mu).
//
// `out_renormalization` is set to NaN for n < 2, where the identity has
// no content.
//
// # Safety
// `out_product` and `out_renormalization` must point to writable doubles.
enum JspStatus jsp_qn_identity_residuals(double lambda_re,
                                         double lambda_im,
                                         double mu_re,
                                         double mu_im,
                                         uint32_t n,
                                         double *out_product,
                                         double *out_renormalization);

// Build a path handle from `sample_count` samples of 4 doubles each
// (z1_re, z1_im, z2_re, z2_im). Only closed paths are accepted.
//
// # Safety
// `samples` must point to `4 * sample_count` readable doubles and `out`
// to a writable pointer slot. The handle must be released with
// [`jsp_path_free`].
enum JspStatus jsp_path_new(const double *samples,
                            uint64_t sample_count,
                            bool closed,
                            struct JspPath **out);

// Build the built-in loop (1 + e^{i theta}/2, 0) with `samples` >= 3
// sample points.
//
// # Safety
// `out` must point to a writable pointer slot; release the handle with
// [`jsp_path_free`].
enum JspStatus jsp_path_gamma(uint64_t samples, struct JspPath **out);

// Orientation-reversed copy of a path.
//
// # Safety
// `path` must be a live handle from this library and `out` a writable
// pointer slot.
enum JspStatus jsp_path_reversed(const struct JspPath *path, struct JspPath **out);

// Copy of a path traversed twice.
//
// # Safety
// `path` must be a live handle from this library and `out` a writable
// pointer slot.
enum JspStatus jsp_path_doubled(const struct JspPath *path, struct JspPath **out);

// Release a path handle. Null is a no-op.
//
// # Safety
// `path` must be null or a handle from this library not yet freed.
void jsp_path_free(struct JspPath *path);

// Winding number of the slice form along the path about parameter `x`.
//
// # Safety
// `path` must be a live handle and `out` a writable 64-bit slot.
enum JspStatus jsp_winding_number(const struct JspPath *path, double x, int64_t *out);

// Homology coupling of the path: half its winding number about 0.
//
// # Safety
// `path` must be a live handle and `out` a writable double.
enum JspStatus jsp_homology_coupling(const struct JspPath *path, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JOINT_SPECTRA_H */
