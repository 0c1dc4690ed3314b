//! C interface to `ltpsurv`.
//!
//! Objects are opaque handles created by `*_new`/`*_fit` functions and
//! released with the matching `*_free`. Every fallible function returns an
//! [`LtpStatus`]; on failure a description is available from
//! [`ltp_last_error`] on the same thread until the next failing call.
//! Panics never cross the boundary and are reported as `LTP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ltpsurv::aft::{aft_fit, aft_location, AftDataset, AftFit, Centring};
use ltpsurv::predict::{prediction_interval, remaining_life_cdf, RemainingLifeQuery};
use ltpsurv::{fit_mle, Baseline, BaselineKind, Error, FitConfig, FitResult, LtpParams, Observation, ParamKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtpStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Divergent = 3,
    Overflow = 4,
    Input = 5,
    /// The optimiser stopped before converging; the handle is still
    /// returned and holds the best point found.
    NotConverged = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtpBaseline {
    Normal = 0,
    StudentT = 1,
    Logistic = 2,
    Laplace = 3,
    ExponentialPower = 4,
    SinhArcsinh = 5,
}

impl From<LtpBaseline> for BaselineKind {
    fn from(b: LtpBaseline) -> Self {
        match b {
            LtpBaseline::Normal => BaselineKind::Normal,
            LtpBaseline::StudentT => BaselineKind::StudentT,
            LtpBaseline::Logistic => BaselineKind::Logistic,
            LtpBaseline::Laplace => BaselineKind::Laplace,
            LtpBaseline::ExponentialPower => BaselineKind::ExponentialPower,
            LtpBaseline::SinhArcsinh => BaselineKind::SinhArcsinh,
        }
    }
}

/// Skewness parameterisation: `a = 1 − γ, b = 1 + γ` or `a = γ, b = 1/γ`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtpParam {
    EpsilonSkew = 0,
    InverseScale = 1,
}

impl From<LtpParam> for ParamKind {
    fn from(p: LtpParam) -> Self {
        match p {
            LtpParam::EpsilonSkew => ParamKind::EpsilonSkew,
            LtpParam::InverseScale => ParamKind::InverseScale,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtpCensoring {
    Exact = 0,
    Right = 1,
    Left = 2,
    /// Lower bound in `times`, upper bound in `upper`.
    Interval = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtpCentring {
    Mean = 0,
    Median = 1,
    /// Uses the accompanying probability argument.
    Quantile = 2,
}

/// A fitted or user-specified LTP distribution.
pub struct LtpDistribution(LtpParams);

/// Result of fitting an LTP distribution to lifetimes.
pub struct LtpFit(FitResult);

/// Result of fitting an AFT model with LTP errors.
pub struct LtpAftModel {
    fit: AftFit,
    intercept: bool,
}

/// Options shared by the fitting entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LtpFitOptions {
    pub baseline: LtpBaseline,
    pub param: LtpParam,
    /// Hold γ fixed at `fixed_gamma`.
    pub fix_gamma: bool,
    pub fixed_gamma: f64,
    /// Starting δ for families with a shape parameter; NaN for the default.
    pub delta: f64,
    pub restarts: usize,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LtpStatus {
    match e {
        Error::Domain(_) => LtpStatus::Domain,
        Error::Divergent(_) => LtpStatus::Divergent,
        Error::Overflow(_) => LtpStatus::Overflow,
        Error::Parse { .. } | Error::Input { .. } | Error::Io { .. } => LtpStatus::Input,
    }
}

/// Runs `f`, converting errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<LtpStatus, (LtpStatus, String)>) -> LtpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            LtpStatus::Panic
        }
    }
}

fn lib(e: Error) -> (LtpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (LtpStatus, String) {
    (LtpStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (LtpStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], (LtpStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (LtpStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn optional(x: f64) -> Option<f64> {
    (!x.is_nan()).then_some(x)
}

/// Message for the last failure on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ltp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default options: epsilon-skew, γ free, family default δ, 3 restarts, seed 1.
#[no_mangle]
pub extern "C" fn ltp_fit_options_default(baseline: LtpBaseline) -> LtpFitOptions {
    LtpFitOptions {
        baseline,
        param: LtpParam::EpsilonSkew,
        fix_gamma: false,
        fixed_gamma: 0.0,
        delta: f64::NAN,
        restarts: 3,
        seed: 1,
    }
}

impl LtpFitOptions {
    fn config(&self) -> FitConfig {
        let mut cfg = FitConfig::new(self.baseline.into());
        cfg.param = self.param.into();
        cfg.fixed_gamma = self.fix_gamma.then_some(self.fixed_gamma);
        cfg.delta = optional(self.delta);
        cfg.restarts = self.restarts;
        cfg.seed = self.seed;
        cfg
    }
}

/// Creates a distribution. `delta` is ignored by families without a shape
/// parameter; pass NaN for the family default.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_distribution_new(
    baseline: LtpBaseline,
    param: LtpParam,
    mu: f64,
    sigma: f64,
    gamma: f64,
    delta: f64,
    out: *mut *mut LtpDistribution,
) -> LtpStatus {
    guard(|| {
        let kind: BaselineKind = baseline.into();
        let delta = if kind.has_delta() {
            optional(delta).or(kind.default_delta())
        } else {
            None
        };
        let base = Baseline::new(kind, delta).map_err(lib)?;
        let p = match param {
            LtpParam::EpsilonSkew => LtpParams::epsilon_skew(mu, sigma, gamma, base),
            LtpParam::InverseScale => LtpParams::inverse_scale(mu, sigma, gamma, base),
        }
        .map_err(lib)?;
        write(out, Box::into_raw(Box::new(LtpDistribution(p))), "out")?;
        Ok(LtpStatus::Ok)
    })
}

/// # Safety
/// `d` must be null or a handle from this library not already freed.
#[no_mangle]
pub unsafe extern "C" fn ltp_distribution_free(d: *mut LtpDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

unsafe fn evaluate(
    d: *const LtpDistribution,
    out: *mut f64,
    f: impl FnOnce(&LtpParams) -> ltpsurv::Result<f64>,
) -> LtpStatus {
    guard(|| {
        let d = deref(d, "d")?;
        let v = f(&d.0).map_err(lib)?;
        write(out, v, "out")?;
        Ok(LtpStatus::Ok)
    })
}

/// Density at `y > 0`.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_pdf(d: *const LtpDistribution, y: f64, out: *mut f64) -> LtpStatus {
    evaluate(d, out, |law| law.pdf(y))
}

/// `P(T ≤ y)`.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_cdf(d: *const LtpDistribution, y: f64, out: *mut f64) -> LtpStatus {
    evaluate(d, out, |law| law.cdf(y))
}

/// `P(T > y)`.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_survival(d: *const LtpDistribution, y: f64, out: *mut f64) -> LtpStatus {
    evaluate(d, out, |law| law.survival(y))
}

/// Hazard `f(y)/S(y)`.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_hazard(d: *const LtpDistribution, y: f64, out: *mut f64) -> LtpStatus {
    evaluate(d, out, |law| law.hazard(y))
}

/// Quantile at probability `p ∈ (0, 1)`.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_quantile(d: *const LtpDistribution, p: f64, out: *mut f64) -> LtpStatus {
    evaluate(d, out, |law| law.quantile(p))
}

/// Fills `out[0..n]` with draws from a seeded generator.
///
/// # Safety
/// `d` must be a live handle and `out` valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_sample(d: *const LtpDistribution, seed: u64, n: usize, out: *mut f64) -> LtpStatus {
    guard(|| {
        let d = deref(d, "d")?;
        if n > 0 && out.is_null() {
            return Err(null("out"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            out.add(i).write(d.0.sample(&mut rng));
        }
        Ok(LtpStatus::Ok)
    })
}

unsafe fn observations(
    times: *const f64,
    upper: *const f64,
    censoring: *const LtpCensoring,
    n: usize,
) -> Result<Vec<Observation>, (LtpStatus, String)> {
    let times = slice(times, n, "times")?;
    let kinds: Vec<LtpCensoring> = if censoring.is_null() {
        vec![LtpCensoring::Exact; n]
    } else {
        slice(censoring, n, "censoring")?.to_vec()
    };
    let mut out = Vec::with_capacity(n);
    for (i, (&t, kind)) in times.iter().zip(kinds).enumerate() {
        let obs = match kind {
            LtpCensoring::Exact => Observation::Exact(t),
            LtpCensoring::Right => Observation::RightCensored(t),
            LtpCensoring::Left => Observation::LeftCensored(t),
            LtpCensoring::Interval => {
                if upper.is_null() {
                    return Err(null("upper"));
                }
                Observation::IntervalCensored(t, *upper.add(i))
            }
        };
        obs.validate()
            .map_err(|e| (LtpStatus::Domain, format!("record {i}: {e}")))?;
        out.push(obs);
    }
    Ok(out)
}

fn fitted(converged: bool) -> LtpStatus {
    if converged {
        LtpStatus::Ok
    } else {
        set_error("the optimiser did not converge".into());
        LtpStatus::NotConverged
    }
}

/// Maximum-likelihood fit to `n` lifetimes. `censoring` may be null for
/// all-exact data; `upper` is read only for interval rows. On `Ok` or
/// `NotConverged` a handle is written to `out`.
///
/// # Safety
/// Arrays must hold `n` elements; `options` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_fit(
    times: *const f64,
    upper: *const f64,
    censoring: *const LtpCensoring,
    n: usize,
    options: *const LtpFitOptions,
    out: *mut *mut LtpFit,
) -> LtpStatus {
    guard(|| {
        let opts = deref(options, "options")?;
        let data = observations(times, upper, censoring, n)?;
        let fit = fit_mle(&data, &opts.config()).map_err(lib)?;
        let converged = fit.converged;
        write(out, Box::into_raw(Box::new(LtpFit(fit))), "out")?;
        Ok(fitted(converged))
    })
}

/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltp_fit_free(f: *mut LtpFit) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of estimated parameters, `mu` first, then `sigma`, `gamma`, `delta`
/// as applicable. Returns 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltp_fit_n_params(f: *const LtpFit) -> usize {
    f.as_ref().map_or(0, |f| f.0.n_params)
}

/// Estimate `index` and, if `name` is not null, a static NUL-terminated
/// parameter name.
///
/// # Safety
/// `f` must be a live handle; `value` valid for writes; `name` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_fit_estimate(
    f: *const LtpFit,
    index: usize,
    value: *mut f64,
    name: *mut *const c_char,
) -> LtpStatus {
    guard(|| {
        let f = deref(f, "f")?;
        let est = f.0.estimates();
        let (n, v) = *est
            .get(index)
            .ok_or_else(|| (LtpStatus::Domain, format!("index {index} out of range 0..{}", est.len())))?;
        write(value, v, "value")?;
        if !name.is_null() {
            name.write(static_name(n));
        }
        Ok(LtpStatus::Ok)
    })
}

// cbindgen cannot parse c"" literals
#[allow(clippy::manual_c_str_literals)]
fn static_name(n: &str) -> *const c_char {
    match n {
        "mu" => b"mu\0".as_ptr().cast(),
        "sigma" => b"sigma\0".as_ptr().cast(),
        "gamma" => b"gamma\0".as_ptr().cast(),
        "delta" => b"delta\0".as_ptr().cast(),
        "sigma1" => b"sigma1\0".as_ptr().cast(),
        "sigma2" => b"sigma2\0".as_ptr().cast(),
        _ => b"?\0".as_ptr().cast(),
    }
}

/// Time-scale log-likelihood and AIC at the estimate.
///
/// # Safety
/// `f` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_fit_loglik(f: *const LtpFit, loglik: *mut f64, aic: *mut f64) -> LtpStatus {
    guard(|| {
        let f = deref(f, "f")?;
        if !loglik.is_null() {
            loglik.write(f.0.loglik);
        }
        if !aic.is_null() {
            aic.write(f.0.aic);
        }
        Ok(LtpStatus::Ok)
    })
}

/// The fitted law as a new distribution handle.
///
/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ltp_fit_distribution(f: *const LtpFit, out: *mut *mut LtpDistribution) -> LtpStatus {
    guard(|| {
        let f = deref(f, "f")?;
        write(out, Box::into_raw(Box::new(LtpDistribution(f.0.params))), "out")?;
        Ok(LtpStatus::Ok)
    })
}

/// Fits `log T = xᵀβ + ε` with LTP errors. `covariates` is row-major
/// `n × p`; with `intercept` a constant column is prepended internally.
///
/// # Safety
/// `times`, `censoring` (nullable) and `upper` (nullable) hold `n` elements,
/// `covariates` holds `n·p`; `options` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_fit(
    times: *const f64,
    upper: *const f64,
    censoring: *const LtpCensoring,
    covariates: *const f64,
    n: usize,
    p: usize,
    intercept: bool,
    options: *const LtpFitOptions,
    out: *mut *mut LtpAftModel,
) -> LtpStatus {
    guard(|| {
        let opts = deref(options, "options")?;
        let obs = observations(times, upper, censoring, n)?;
        let x = slice(covariates, n * p, "covariates")?;
        let rows: Vec<Vec<f64>> = if p == 0 {
            vec![Vec::new(); n]
        } else {
            x.chunks(p).map(<[f64]>::to_vec).collect()
        };
        let names = (1..=p).map(|j| format!("x{j}")).collect();
        let data = AftDataset::new(names, rows, obs, intercept).map_err(lib)?;
        let fit = aft_fit(&data, &opts.config()).map_err(lib)?;
        let converged = fit.converged;
        write(out, Box::into_raw(Box::new(LtpAftModel { fit, intercept })), "out")?;
        Ok(fitted(converged))
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_free(m: *mut LtpAftModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of regression coefficients, intercept included.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_n_coefficients(m: *const LtpAftModel) -> usize {
    m.as_ref().map_or(0, |m| m.fit.params.beta().len())
}

/// Copies β into `beta[0..ltp_aft_n_coefficients(m)]` and the error
/// parameters into the non-null outputs; δ is NaN for families without one.
///
/// # Safety
/// `m` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_coefficients(
    m: *const LtpAftModel,
    beta: *mut f64,
    sigma: *mut f64,
    gamma: *mut f64,
    delta: *mut f64,
) -> LtpStatus {
    guard(|| {
        let m = deref(m, "m")?;
        let p = &m.fit.params;
        if !beta.is_null() {
            ptr::copy_nonoverlapping(p.beta().as_ptr(), beta, p.beta().len());
        }
        let outs = [
            (sigma, p.error_sigma()),
            (gamma, p.error_gamma().unwrap_or(f64::NAN)),
            (delta, p.error_delta().unwrap_or(f64::NAN)),
        ];
        for (ptr, v) in outs {
            if !ptr.is_null() {
                ptr.write(v);
            }
        }
        Ok(LtpStatus::Ok)
    })
}

/// Log-time-scale log-likelihood and AIC, the scale conventionally used to
/// compare AFT models.
///
/// # Safety
/// `m` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_loglik(m: *const LtpAftModel, loglik: *mut f64, aic: *mut f64) -> LtpStatus {
    guard(|| {
        let m = deref(m, "m")?;
        if !loglik.is_null() {
            loglik.write(m.fit.loglik_log_time);
        }
        if !aic.is_null() {
            aic.write(m.fit.aic_log_time);
        }
        Ok(LtpStatus::Ok)
    })
}

unsafe fn design_row(m: &LtpAftModel, x: *const f64) -> Result<Vec<f64>, (LtpStatus, String)> {
    let k = m.fit.params.beta().len() - usize::from(m.intercept);
    let x = slice(x, k, "x")?;
    let mut row = Vec::with_capacity(k + 1);
    if m.intercept {
        row.push(1.0);
    }
    row.extend_from_slice(x);
    Ok(row)
}

/// Centred location of `log T` for covariates `x` (without the constant).
///
/// # Safety
/// `m` must be a live handle, `x` hold the model's covariate count, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_location(
    m: *const LtpAftModel,
    x: *const f64,
    centring: LtpCentring,
    probability: f64,
    out: *mut f64,
) -> LtpStatus {
    guard(|| {
        let m = deref(m, "m")?;
        let row = design_row(m, x)?;
        let target = match centring {
            LtpCentring::Mean => Centring::Mean,
            LtpCentring::Median => Centring::Median,
            LtpCentring::Quantile => Centring::Quantile(probability),
        };
        let v = aft_location(&m.fit.params, &row, target).map_err(lib)?;
        write(out, v, "out")?;
        Ok(LtpStatus::Ok)
    })
}

/// `P(T ≤ t | T > alive_at)` for covariates `x` (without the constant).
///
/// # Safety
/// `m` must be a live handle, `x` hold the model's covariate count, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_remaining_life_cdf(
    m: *const LtpAftModel,
    x: *const f64,
    alive_at: f64,
    t: f64,
    out: *mut f64,
) -> LtpStatus {
    guard(|| {
        let m = deref(m, "m")?;
        let q = RemainingLifeQuery::new(design_row(m, x)?, alive_at);
        let v = remaining_life_cdf(&m.fit.params, &q, t).map_err(lib)?;
        write(out, v, "out")?;
        Ok(LtpStatus::Ok)
    })
}

/// Prediction interval `[lower, upper]` for the lifetime of a subject alive
/// at `alive_at`, with tail probabilities `alpha1` and `alpha2`. `upper` is
/// +∞ when it exceeds the double range.
///
/// # Safety
/// `m` must be a live handle, `x` hold the model's covariate count, outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ltp_aft_prediction_interval(
    m: *const LtpAftModel,
    x: *const f64,
    alive_at: f64,
    alpha1: f64,
    alpha2: f64,
    lower: *mut f64,
    upper: *mut f64,
) -> LtpStatus {
    guard(|| {
        let m = deref(m, "m")?;
        let q = RemainingLifeQuery::new(design_row(m, x)?, alive_at).with_alphas(alpha1, alpha2);
        let pi = prediction_interval(&m.fit.params, &q).map_err(lib)?;
        write(lower, pi.lower, "lower")?;
        write(upper, pi.upper, "upper")?;
        Ok(LtpStatus::Ok)
    })
}
