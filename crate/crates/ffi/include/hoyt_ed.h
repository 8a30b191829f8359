/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef HOYT_ED_H
#define HOYT_ED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum HedStatus {
  HED_STATUS_OK = 0,
  HED_STATUS_NULL_POINTER = 1,
  HED_STATUS_DOMAIN = 2,
  HED_STATUS_CONVERGENCE = 3,
  HED_STATUS_OVERFLOW = 4,
  HED_STATUS_INVALID_CONFIG = 5,
  HED_STATUS_PANIC = 6,
} HedStatus;

typedef enum HedMethod {
  HED_METHOD_CLOSED_INTEGER = 0,
  HED_METHOD_CLOSED_SERIES = 1,
  HED_METHOD_QUADRATURE = 2,
  HED_METHOD_MONTE_CARLO = 3,
} HedMethod;

/**
 * Hoyt fading channel.
 */
typedef struct HedChannel HedChannel;

/**
 * Energy detector with time-bandwidth product u.
 */
typedef struct HedDetector HedDetector;

/**
 * Truncation and quadrature controls.
 */
typedef struct HedPolicy HedPolicy;

/**
 * A probability with its provenance.
 */
typedef struct HedMetric {
  double value;
  double est_error;
  size_t terms_used;
  enum HedMethod method;
} HedMetric;

typedef struct HedMcEstimate {
  double value;
  double std_error;
  size_t trials;
} HedMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *hed_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hed_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum HedStatus hed_detector_new(double u, struct HedDetector **out);

/**
 * # Safety
 * `det` must be NULL or a handle from `hed_detector_new` not yet freed.
 */
void hed_detector_free(struct HedDetector *det);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum HedStatus hed_channel_new(double q, double gamma_bar, struct HedChannel **out);

/**
 * # Safety
 * `chan` must be NULL or a handle from `hed_channel_new` not yet freed.
 */
void hed_channel_free(struct HedChannel *chan);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum HedStatus hed_policy_new(double rel_tol,
                              size_t max_terms,
                              uint32_t quad_levels,
                              struct HedPolicy **out);

/**
 * # Safety
 * `policy` must be NULL or a handle from `hed_policy_new` not yet freed.
 */
void hed_policy_free(struct HedPolicy *policy);

/**
 * False-alarm probability at threshold `lambda`.
 *
 * # Safety
 * `det` must be a live detector handle and `out` writable.
 */
enum HedStatus hed_pf(const struct HedDetector *det, double lambda, double *out);

/**
 * Detection probability at SNR `gamma` (linear) and threshold `lambda`.
 *
 * # Safety
 * `det` must be a live detector handle and `out` writable.
 */
enum HedStatus hed_pd(const struct HedDetector *det, double gamma, double lambda, double *out);

/**
 * Threshold giving false-alarm probability `pf_target`.
 *
 * # Safety
 * `det` must be a live detector handle and `out` writable.
 */
enum HedStatus hed_threshold_for_pf(const struct HedDetector *det, double pf_target, double *out);

/**
 * AUC without fading at SNR `gamma` (linear).
 *
 * # Safety
 * `det` must be a live detector handle and `out` writable.
 */
enum HedStatus hed_auc_awgn(const struct HedDetector *det, double gamma, struct HedMetric *out);

/**
 * AUC without fading by direct integration over the threshold.
 *
 * # Safety
 * `det` must be a live detector handle, `policy` NULL (defaults) or live, and `out` writable.
 */
enum HedStatus hed_auc_quadrature(const struct HedDetector *det,
                                  double gamma,
                                  const struct HedPolicy *policy,
                                  struct HedMetric *out);

/**
 * Fading-averaged AUC from the closed forms.
 *
 * # Safety
 * `det` and `chan` must be live handles, `policy` NULL (defaults) or live, and `out` writable.
 */
enum HedStatus hed_avg_auc(const struct HedDetector *det,
                           const struct HedChannel *chan,
                           const struct HedPolicy *policy,
                           struct HedMetric *out);

/**
 * Fading-averaged complementary AUC.
 *
 * # Safety
 * As for [`hed_avg_auc`].
 */
enum HedStatus hed_avg_cauc(const struct HedDetector *det,
                            const struct HedChannel *chan,
                            const struct HedPolicy *policy,
                            struct HedMetric *out);

/**
 * Fading-averaged AUC by integrating the unfaded AUC against the SNR density.
 *
 * # Safety
 * As for [`hed_avg_auc`].
 */
enum HedStatus hed_avg_auc_quadrature(const struct HedDetector *det,
                                      const struct HedChannel *chan,
                                      const struct HedPolicy *policy,
                                      struct HedMetric *out);

/**
 * Fading-averaged detection probability at threshold `lambda`.
 *
 * # Safety
 * As for [`hed_avg_auc`].
 */
enum HedStatus hed_avg_pd(const struct HedDetector *det,
                          const struct HedChannel *chan,
                          double lambda,
                          const struct HedPolicy *policy,
                          struct HedMetric *out);

/**
 * SNR density of the channel at `gamma`.
 *
 * # Safety
 * `chan` must be a live handle and `out` writable.
 */
enum HedStatus hed_snr_pdf(const struct HedChannel *chan, double gamma, double *out);

/**
 * SNR distribution function of the channel at `gamma`.
 *
 * # Safety
 * `chan` must be a live handle and `out` writable.
 */
enum HedStatus hed_snr_cdf(const struct HedChannel *chan, double gamma, double *out);

/**
 * Moment generating function E[exp(s·γ)].
 *
 * # Safety
 * `chan` must be a live handle and `out` writable.
 */
enum HedStatus hed_snr_mgf(const struct HedChannel *chan, double s, double *out);

/**
 * Monte-Carlo AUC. With `chan` NULL the SNR is fixed at `gamma`; otherwise a
 * fresh SNR is drawn from the channel for every trial and `gamma` is ignored.
 *
 * # Safety
 * `det` must be a live handle, `chan` NULL or live, and `out` writable.
 */
enum HedStatus hed_estimate_auc(const struct HedDetector *det,
                                const struct HedChannel *chan,
                                double gamma,
                                size_t trials,
                                uint64_t seed,
                                struct HedMcEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOYT_ED_H */
