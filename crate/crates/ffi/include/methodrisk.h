#ifndef METHODRISK_H
#define METHODRISK_H

/* Generated by cbindgen from the methodrisk-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Interval construction selector.
 */
typedef enum {
  /**
   * Pool all observations as one i.i.d. sample.
   */
  MR_METHOD_SIMPLE = 0,
  /**
   * One-way random-effects construction.
   */
  MR_METHOD_ONE_WAY = 1,
} MrMethod;

/**
 * Status of a toolkit call.
 */
typedef enum {
  /**
   * Success; out-parameters hold results.
   */
  MR_STATUS_OK = 0,
  /**
   * An input lay outside the mathematical domain.
   */
  MR_STATUS_DOMAIN = 1,
  /**
   * Replicate values were exactly constant (zero within-series spread).
   */
  MR_STATUS_DEGENERATE_VARIANCE = 2,
  /**
   * The dataset is not balanced.
   */
  MR_STATUS_UNBALANCED = 3,
  /**
   * The design cannot identify the variance components.
   */
  MR_STATUS_UNIDENTIFIABLE = 4,
  /**
   * The rule text or parameters are invalid.
   */
  MR_STATUS_INVALID_RULE = 5,
  /**
   * The rule's half-width and the supplied limits disagree.
   */
  MR_STATUS_LAMBDA_MISMATCH = 6,
  /**
   * A grid was not strictly increasing.
   */
  MR_STATUS_UNSORTED_GRID = 7,
  /**
   * The dataset contents are invalid.
   */
  MR_STATUS_DATASET = 8,
  /**
   * A size limit was exceeded.
   */
  MR_STATUS_TOO_LARGE = 9,
  /**
   * A required pointer was null.
   */
  MR_STATUS_NULL_POINTER = 10,
  /**
   * A panic was caught at the ABI boundary.
   */
  MR_STATUS_INTERNAL_PANIC = 11,
} MrStatus;

/**
 * Opaque measurement dataset under construction: series of replicates on
 * the percent-of-target error scale.
 */
typedef struct MrDataset MrDataset;

/**
 * Opaque parsed acceptance rule.
 */
typedef struct MrRule MrRule;

/**
 * Variance decomposition of a balanced one-way layout.
 */
typedef struct {
  uint64_t n_series;
  uint64_t n_replicates;
  double bias;
  double ms_within;
  double ms_between;
  double var_between;
  double var_within;
  double var_intermediate;
  double ratio;
} MrComponents;

/**
 * A two-sided beta-expectation tolerance interval.
 */
typedef struct {
  MrMethod method;
  double beta;
  double lower;
  double upper;
  double center;
  double k_factor;
  double sd;
  double dof;
} MrInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Stable, human-readable name of a status code. Never null.
 */
const char *mr_status_name(MrStatus status);

/**
 * Standard normal CDF. Total function, NaN in gives NaN out.
 */
double mr_normal_cdf(double z);

/**
 * Standard normal quantile for p strictly inside (0, 1).
 *
 * # Safety
 * `out` is null-checked; when non-null it must be valid for writes.
 */
MrStatus mr_normal_quantile(double p, double *out);

/**
 * Student t quantile for p in (0, 1) and dof > 0 (fractional allowed).
 *
 * # Safety
 * `out` is null-checked; when non-null it must be valid for writes.
 */
MrStatus mr_t_quantile(double p, double dof, double *out);

/**
 * P(result within +/- lambda of target) for a procedure with this bias
 * and standard deviation.
 *
 * # Safety
 * `out` is null-checked; when non-null it must be valid for writes.
 */
MrStatus mr_prob_within(double bias, double sigma, double lambda, double *out);

/**
 * Boundary standard deviation where capability equals `beta` at this
 * bias. When no boundary exists (|bias| >= lambda), `*exists` is set to
 * false and `*out` to NaN.
 *
 * # Safety
 * `exists` and `out` are null-checked; when non-null they must be
 * valid for writes.
 */
MrStatus mr_region_boundary_sigma(double bias,
                                  double lambda,
                                  double beta,
                                  bool *exists,
                                  double *out);

/**
 * Parses `text` (k-m-lambda[:constrained[2,2,...]]) into a rule handle.
 * The handle must be released with `mr_rule_free`.
 *
 * # Safety
 * `text` is null-checked; when non-null it must point to a
 * NUL-terminated string. `out` likewise must be valid for writes.
 */
MrStatus mr_rule_parse(const char *text, MrRule **out);

/**
 * Releases a rule handle. Null is ignored.
 *
 * # Safety
 * `rule` must be null (ignored) or an unreleased handle from
 * `mr_rule_parse`; it is invalid after the call.
 */
void mr_rule_free(MrRule *rule);

/**
 * The rule's acceptance half-width.
 *
 * # Safety
 * `rule` is null-checked; when non-null it must be a live handle from
 * `mr_rule_parse`. `out` likewise must be valid for writes.
 */
MrStatus mr_rule_lambda(const MrRule *rule, double *out);

/**
 * Block acceptance probability at per-run pass probability `p`.
 *
 * # Safety
 * `rule` is null-checked; when non-null it must be a live handle from
 * `mr_rule_parse`. `out` likewise must be valid for writes.
 */
MrStatus mr_rule_oc(const MrRule *rule, double p, double *out);

/**
 * Smallest per-run pass probability whose OC reaches `gamma`.
 *
 * # Safety
 * `rule` is null-checked; when non-null it must be a live handle from
 * `mr_rule_parse`. `out` likewise must be valid for writes.
 */
MrStatus mr_rule_invert_oc(const MrRule *rule, double gamma, double *out);

/**
 * Required per-run quality: OC inversion at `gamma`, optionally rounded
 * up to `granularity` (pass 0 for no rounding).
 *
 * # Safety
 * `rule` is null-checked; when non-null it must be a live handle from
 * `mr_rule_parse`. `out` likewise must be valid for writes.
 */
MrStatus mr_rule_required_beta(const MrRule *rule, double gamma, double granularity, double *out);

/**
 * Creates an empty dataset handle. Release with `mr_dataset_free`.
 *
 * # Safety
 * `out` is null-checked; when non-null it must be valid for writes.
 */
MrStatus mr_dataset_new(MrDataset **out);

/**
 * Appends one series of replicate values (copied out of `values`).
 *
 * # Safety
 * `dataset` is null-checked; when non-null it must be a live handle
 * from `mr_dataset_new`. `values` likewise must point to `len` readable
 * doubles.
 */
MrStatus mr_dataset_push_series(MrDataset *dataset, const double *values, size_t len);

/**
 * Releases a dataset handle. Null is ignored.
 *
 * # Safety
 * `dataset` must be null (ignored) or an unreleased handle from
 * `mr_dataset_new`; it is invalid after the call.
 */
void mr_dataset_free(MrDataset *dataset);

/**
 * Estimates the variance decomposition of the dataset.
 *
 * # Safety
 * `dataset` is null-checked; when non-null it must be a live handle
 * from `mr_dataset_new`. `out` likewise must be valid for writes.
 */
MrStatus mr_components(const MrDataset *dataset, MrComponents *out);

/**
 * Builds the beta-expectation tolerance interval for the dataset.
 *
 * # Safety
 * `dataset` is null-checked; when non-null it must be a live handle
 * from `mr_dataset_new`. `out` likewise must be valid for writes.
 */
MrStatus mr_interval(const MrDataset *dataset, MrMethod method, double beta, MrInterval *out);

/**
 * Strict pre-study decision: true only when the whole interval lies
 * strictly inside (-lambda, lambda).
 *
 * # Safety
 * `interval` is null-checked; when non-null it must point to a
 * readable `MrInterval`. `out` likewise must be valid for writes.
 */
MrStatus mr_prestudy_accepts(const MrInterval *interval, double lambda, bool *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* METHODRISK_H */
