#ifndef LTPSURV_H
#define LTPSURV_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum LtpBaseline {
  LTP_BASELINE_NORMAL = 0,
  LTP_BASELINE_STUDENT_T = 1,
  LTP_BASELINE_LOGISTIC = 2,
  LTP_BASELINE_LAPLACE = 3,
  LTP_BASELINE_EXPONENTIAL_POWER = 4,
  LTP_BASELINE_SINH_ARCSINH = 5,
} LtpBaseline;

typedef enum LtpCensoring {
  LTP_CENSORING_EXACT = 0,
  LTP_CENSORING_RIGHT = 1,
  LTP_CENSORING_LEFT = 2,
  // Lower bound in `times`, upper bound in `upper`.
  LTP_CENSORING_INTERVAL = 3,
} LtpCensoring;

typedef enum LtpCentring {
  LTP_CENTRING_MEAN = 0,
  LTP_CENTRING_MEDIAN = 1,
  // Uses the accompanying probability argument.
  LTP_CENTRING_QUANTILE = 2,
} LtpCentring;

// Skewness parameterisation: `a = 1 − γ, b = 1 + γ` or `a = γ, b = 1/γ`.
typedef enum LtpParam {
  LTP_PARAM_EPSILON_SKEW = 0,
  LTP_PARAM_INVERSE_SCALE = 1,
} LtpParam;

typedef enum LtpStatus {
  LTP_STATUS_OK = 0,
  LTP_STATUS_NULL_POINTER = 1,
  LTP_STATUS_DOMAIN = 2,
  LTP_STATUS_DIVERGENT = 3,
  LTP_STATUS_OVERFLOW = 4,
  LTP_STATUS_INPUT = 5,
  // The optimiser stopped before converging; the handle is still
  // returned and holds the best point found.
  LTP_STATUS_NOT_CONVERGED = 6,
  LTP_STATUS_PANIC = 7,
} LtpStatus;

// Result of fitting an AFT model with LTP errors.
typedef struct LtpAftModel LtpAftModel;

// A fitted or user-specified LTP distribution.
typedef struct LtpDistribution LtpDistribution;

// Result of fitting an LTP distribution to lifetimes.
typedef struct LtpFit LtpFit;

// Options shared by the fitting entry points.
typedef struct LtpFitOptions {
  enum LtpBaseline baseline;
  enum LtpParam param;
  // Hold γ fixed at `fixed_gamma`.
  bool fix_gamma;
  double fixed_gamma;
  // Starting δ for families with a shape parameter; NaN for the default.
  double delta;
  uintptr_t restarts;
  uint64_t seed;
} LtpFitOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null if none. The
// pointer stays valid until the next failing call on the same thread.
const char *ltp_last_error(void);

// Default options: epsilon-skew, γ free, family default δ, 3 restarts, seed 1.
struct LtpFitOptions ltp_fit_options_default(enum LtpBaseline baseline);

// Creates a distribution. `delta` is ignored by families without a shape
// parameter; pass NaN for the family default.
//
// # Safety
// `out` must be valid for writes.
enum LtpStatus ltp_distribution_new(enum LtpBaseline baseline,
                                    enum LtpParam param,
                                    double mu,
                                    double sigma,
                                    double gamma,
                                    double delta,
                                    struct LtpDistribution **out);

// # Safety
// `d` must be null or a handle from this library not already freed.
void ltp_distribution_free(struct LtpDistribution *d);

// Density at `y > 0`.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum LtpStatus ltp_pdf(const struct LtpDistribution *d, double y, double *out);

// `P(T ≤ y)`.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum LtpStatus ltp_cdf(const struct LtpDistribution *d, double y, double *out);

// `P(T > y)`.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum LtpStatus ltp_survival(const struct LtpDistribution *d, double y, double *out);

// Hazard `f(y)/S(y)`.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum LtpStatus ltp_hazard(const struct LtpDistribution *d, double y, double *out);

// Quantile at probability `p ∈ (0, 1)`.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum LtpStatus ltp_quantile(const struct LtpDistribution *d, double p, double *out);

// Fills `out[0..n]` with draws from a seeded generator.
//
// # Safety
// `d` must be a live handle and `out` valid for `n` writes.
enum LtpStatus ltp_sample(const struct LtpDistribution *d, uint64_t seed, uintptr_t n, double *out);

// Maximum-likelihood fit to `n` lifetimes. `censoring` may be null for
// all-exact data; `upper` is read only for interval rows. On `Ok` or
// `NotConverged` a handle is written to `out`.
//
// # Safety
// Arrays must hold `n` elements; `options` and `out` must be valid.
enum LtpStatus ltp_fit(const double *times,
                       const double *upper,
                       const enum LtpCensoring *censoring,
                       uintptr_t n,
                       const struct LtpFitOptions *options,
                       struct LtpFit **out);

// # Safety
// `f` must be null or a live handle.
void ltp_fit_free(struct LtpFit *f);

// Number of estimated parameters, `mu` first, then `sigma`, `gamma`, `delta`
// as applicable. Returns 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
uintptr_t ltp_fit_n_params(const struct LtpFit *f);

// Estimate `index` and, if `name` is not null, a static NUL-terminated
// parameter name.
//
// # Safety
// `f` must be a live handle; `value` valid for writes; `name` null or valid.
enum LtpStatus ltp_fit_estimate(const struct LtpFit *f,
                                uintptr_t index,
                                double *value,
                                const char **name);

// Time-scale log-likelihood and AIC at the estimate.
//
// # Safety
// `f` must be a live handle; outputs null or valid.
enum LtpStatus ltp_fit_loglik(const struct LtpFit *f, double *loglik, double *aic);

// The fitted law as a new distribution handle.
//
// # Safety
// `f` must be a live handle and `out` valid for writes.
enum LtpStatus ltp_fit_distribution(const struct LtpFit *f, struct LtpDistribution **out);

// Fits `log T = xᵀβ + ε` with LTP errors. `covariates` is row-major
// `n × p`; with `intercept` a constant column is prepended internally.
//
// # Safety
// `times`, `censoring` (nullable) and `upper` (nullable) hold `n` elements,
// `covariates` holds `n·p`; `options` and `out` must be valid.
enum LtpStatus ltp_aft_fit(const double *times,
                           const double *upper,
                           const enum LtpCensoring *censoring,
                           const double *covariates,
                           uintptr_t n,
                           uintptr_t p,
                           bool intercept,
                           const struct LtpFitOptions *options,
                           struct LtpAftModel **out);

// # Safety
// `m` must be null or a live handle.
void ltp_aft_free(struct LtpAftModel *m);

// Number of regression coefficients, intercept included.
//
// # Safety
// `m` must be null or a live handle.
uintptr_t ltp_aft_n_coefficients(const struct LtpAftModel *m);

// Copies β into `beta[0..ltp_aft_n_coefficients(m)]` and the error
// parameters into the non-null outputs; δ is NaN for families without one.
//
// # Safety
// `m` must be a live handle; outputs null or valid.
enum LtpStatus ltp_aft_coefficients(const struct LtpAftModel *m,
                                    double *beta,
                                    double *sigma,
                                    double *gamma,
                                    double *delta);

// Log-time-scale log-likelihood and AIC, the scale conventionally used to
// compare AFT models.
//
// # Safety
// `m` must be a live handle; outputs null or valid.
enum LtpStatus ltp_aft_loglik(const struct LtpAftModel *m, double *loglik, double *aic);

// Centred location of `log T` for covariates `x` (without the constant).
//
// # Safety
// `m` must be a live handle, `x` hold the model's covariate count, `out` valid.
enum LtpStatus ltp_aft_location(const struct LtpAftModel *m,
                                const double *x,
                                enum LtpCentring centring,
                                double probability,
                                double *out);

// `P(T ≤ t | T > alive_at)` for covariates `x` (without the constant).
//
// # Safety
// `m` must be a live handle, `x` hold the model's covariate count, `out` valid.
enum LtpStatus ltp_aft_remaining_life_cdf(const struct LtpAftModel *m,
                                          const double *x,
                                          double alive_at,
                                          double t,
                                          double *out);

// Prediction interval `[lower, upper]` for the lifetime of a subject alive
// at `alive_at`, with tail probabilities `alpha1` and `alpha2`. `upper` is
// +∞ when it exceeds the double range.
//
// # Safety
// `m` must be a live handle, `x` hold the model's covariate count, outputs valid.
enum LtpStatus ltp_aft_prediction_interval(const struct LtpAftModel *m,
                                           const double *x,
                                           double alive_at,
                                           double alpha1,
                                           double alpha2,
                                           double *lower,
                                           double *upper);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LTPSURV_H */
