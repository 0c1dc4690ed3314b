//! Censored-data likelihood, maximum-likelihood fitting, AIC and
//! profile-likelihood intervals for LTP distributions.
//!
//! Two likelihood scales are reported. The *time* scale uses the density of
//! `T` for exact observations; the *log-time* scale uses the density of
//! `log T`. They differ by the constant `Σ log tⱼ` over exact observations, so
//! both give the same estimates and the same AIC differences between models
//! fitted to one dataset.

use std::fmt;

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::baselines::BaselineKind;
use crate::engine::{self, SearchOptions, ShapeLayout};
use crate::error::{Error, Result};
use crate::ltp::LtpParams;
use crate::twopiece::{ParamKind, TwoPieceParams};

/// Above this the fitted Student-t degrees of freedom are indistinguishable
/// from the normal limit.
pub const EFFECTIVELY_NORMAL_DF: f64 = 1e4;

/// Relative-likelihood cut matching a 95% interval.
pub const PROFILE_LEVEL_95: f64 = 0.147;

/// A lifetime record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observation {
    Exact(f64),
    /// The event happened before this time.
    LeftCensored(f64),
    /// The event had not happened by this time.
    RightCensored(f64),
    /// The event happened between the two times.
    IntervalCensored(f64, f64),
}

impl Observation {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Observation::Exact(t) | Observation::LeftCensored(t) | Observation::RightCensored(t) => {
                t > 0.0 && t.is_finite()
            }
            Observation::IntervalCensored(l, r) => l > 0.0 && l < r && r.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid observation {self:?}")))
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Observation::Exact(_))
    }

    /// A single log time standing in for the record: the time itself, the
    /// censoring bound, or the interval midpoint.
    pub fn representative_log_time(&self) -> f64 {
        match *self {
            Observation::Exact(t) | Observation::LeftCensored(t) | Observation::RightCensored(t) => {
                t.ln()
            }
            Observation::IntervalCensored(l, r) => (0.5 * (l + r)).ln(),
        }
    }

    /// Log-likelihood contribution with `log T` distributed as `tp` shifted by `shift`.
    pub(crate) fn ln_contribution(&self, tp: &TwoPieceParams, shift: f64) -> f64 {
        match *self {
            Observation::Exact(t) => tp.ln_pdf(t.ln() - shift),
            Observation::LeftCensored(t) => tp.ln_cdf(t.ln() - shift),
            Observation::RightCensored(t) => tp.ln_sf(t.ln() - shift),
            Observation::IntervalCensored(l, r) => {
                let (xl, xr) = (l.ln() - shift, r.ln() - shift);
                if tp.cdf(xl) > 0.5 {
                    // upper part of the law: difference of survival values
                    let (sl, sr) = (tp.ln_sf(xl), tp.ln_sf(xr));
                    sl + ln_one_minus_exp(sr - sl)
                } else {
                    let (cl, cr) = (tp.ln_cdf(xl), tp.ln_cdf(xr));
                    cr + ln_one_minus_exp(cl - cr)
                }
            }
        }
    }
}

/// `ln(1 − eˣ)` for `x ≤ 0`.
fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

pub(crate) fn check_dataset(data: &[Observation]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::domain("dataset is empty"));
    }
    for obs in data {
        obs.validate()?;
    }
    Ok(())
}

/// `Σ log tⱼ` over exact observations: the gap between the two likelihood scales.
pub(crate) fn exact_log_time_sum(data: &[Observation]) -> f64 {
    data.iter()
        .filter_map(|o| match o {
            Observation::Exact(t) => Some(t.ln()),
            _ => None,
        })
        .sum()
}

/// Censored log-likelihood on the time scale; `−∞` when any record has zero probability.
///
/// Every term is evaluated in the log domain, so remote tail records give
/// large negative but finite contributions.
pub fn log_likelihood(p: &LtpParams, data: &[Observation]) -> Result<f64> {
    Ok(log_likelihood_log_time(p, data)? - exact_log_time_sum(data))
}

/// Censored log-likelihood of the log times.
pub fn log_likelihood_log_time(p: &LtpParams, data: &[Observation]) -> Result<f64> {
    check_dataset(data)?;
    Ok(sum_contributions(p.log_law(), data))
}

fn sum_contributions(tp: &TwoPieceParams, data: &[Observation]) -> f64 {
    let mut total = 0.0;
    for obs in data {
        let c = obs.ln_contribution(tp, 0.0);
        if c == f64::NEG_INFINITY || c.is_nan() {
            return f64::NEG_INFINITY;
        }
        total += c;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub baseline: BaselineKind,
    pub param: ParamKind,
    /// Estimate δ; when false δ stays at `delta`.
    pub fit_delta: bool,
    /// Starting (or fixed) δ; the family default when absent.
    pub delta: Option<f64>,
    /// Hold γ at this value instead of estimating it.
    pub fixed_gamma: Option<f64>,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl FitConfig {
    pub fn new(baseline: BaselineKind) -> Self {
        Self {
            baseline,
            param: ParamKind::EpsilonSkew,
            fit_delta: true,
            delta: None,
            fixed_gamma: None,
            max_iterations: 5000,
            tolerance: 1e-8,
            restarts: 3,
            seed: 1,
        }
    }

    /// The log-symmetric submodel: γ held at its symmetric value.
    pub fn symmetric(baseline: BaselineKind) -> Self {
        let mut cfg = Self::new(baseline);
        cfg.fixed_gamma = Some(0.0);
        cfg
    }

    pub fn with_param(mut self, param: ParamKind) -> Self {
        if self.fixed_gamma.is_some() && param == ParamKind::InverseScale {
            self.fixed_gamma = Some(1.0);
        }
        self.param = param;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations must be positive"));
        }
        if self.param == ParamKind::RawScales && self.fixed_gamma.is_some() {
            return Err(Error::domain("raw scales have no gamma to fix"));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::domain(format!("delta must be positive, got {d}")));
            }
            if !self.baseline.has_delta() {
                return Err(Error::domain(format!(
                    "the {} baseline has no delta",
                    self.baseline.display_name()
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn layout(&self) -> ShapeLayout {
        let fixed_delta = if self.baseline.has_delta() && !self.fit_delta {
            self.delta.or(self.baseline.default_delta())
        } else {
            None
        };
        ShapeLayout {
            baseline: self.baseline,
            param: self.param,
            fixed_gamma: self.fixed_gamma,
            fixed_delta,
        }
    }

    pub(crate) fn search(&self) -> SearchOptions {
        SearchOptions {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            restarts: self.restarts,
            seed: self.seed,
        }
    }

    /// A short model name, e.g. "LTP SAS" or "Log-normal".
    pub fn label(&self) -> String {
        let family = self.baseline.display_name();
        let symmetric = self.fixed_gamma.is_some_and(|g| match self.param {
            ParamKind::InverseScale => g == 1.0,
            _ => g == 0.0,
        });
        if symmetric {
            let family = if self.baseline == BaselineKind::Normal {
                "normal"
            } else {
                family
            };
            format!("Log-{family}")
        } else {
            format!("LTP {family}")
        }
    }
}

/// Parameter names accepted by [`profile_ci`] for a configuration: `mu`
/// followed by the free shape parameters.
pub fn parameter_names(config: &FitConfig) -> Vec<&'static str> {
    let mut names = vec!["mu"];
    names.extend(config.layout().names());
    names
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileInterval {
    pub name: String,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    /// The cut was not crossed below the estimate within the search range.
    pub lower_open: bool,
    pub upper_open: bool,
}

impl fmt::Display for ProfileInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = if self.lower_open { "(open) " } else { "" };
        let hi = if self.upper_open { " (open)" } else { "" };
        write!(f, "{}: {lo}{} .. {}{hi}", self.name, self.lower, self.upper)
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub config: FitConfig,
    pub params: LtpParams,
    /// Maximised log-likelihood on the time scale.
    pub loglik: f64,
    pub aic: f64,
    pub loglik_log_time: f64,
    pub aic_log_time: f64,
    pub n_params: usize,
    pub n_obs: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Student-t fit whose degrees of freedom exceed [`EFFECTIVELY_NORMAL_DF`].
    pub effectively_normal: bool,
    pub warnings: Vec<String>,
    pub profile_cis: Vec<ProfileInterval>,
    internal: Vec<f64>,
}

impl FitResult {
    /// Natural-scale values of the estimated parameters, `mu` first.
    pub fn estimates(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("mu", self.params.mu())];
        out.extend(self.config.layout().natural_values(self.params.log_law()));
        out
    }

    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.estimates()
            .into_iter()
            .find_map(|(n, v)| (n == name).then_some(v))
    }

    pub fn label(&self) -> String {
        self.config.label()
    }
}

pub(crate) fn aic(k: usize, loglik: f64) -> f64 {
    2.0 * k as f64 - 2.0 * loglik
}

/// Maximum-likelihood fit of an LTP law to censored lifetimes.
pub fn fit_mle(data: &[Observation], config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    check_dataset(data)?;
    if !data.iter().any(Observation::is_exact) {
        return Err(Error::domain("at least one uncensored observation is required"));
    }
    let start = robust_start(data);
    fit_core(
        data.len(),
        |tp| sum_contributions(tp, data),
        start,
        exact_log_time_sum(data),
        config,
    )
}

/// Fit from fully observed log lifetimes `yⱼ = log tⱼ`.
///
/// Equivalent to [`fit_mle`] on `exp(yⱼ)`, but usable when the lifetimes
/// themselves overflow or underflow, as heavy-tailed samples often do.
pub fn fit_mle_log_scale(log_times: &[f64], config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    if log_times.is_empty() {
        return Err(Error::domain("dataset is empty"));
    }
    if let Some(y) = log_times.iter().find(|y| !y.is_finite()) {
        return Err(Error::domain(format!("log time must be finite, got {y}")));
    }
    let mut logs = log_times.to_vec();
    let start = robust_log_start(&mut logs);
    let contributions = |tp: &TwoPieceParams| {
        let mut total = 0.0;
        for &y in log_times {
            let c = tp.ln_pdf(y);
            if c == f64::NEG_INFINITY || c.is_nan() {
                return f64::NEG_INFINITY;
            }
            total += c;
        }
        total
    };
    fit_core(log_times.len(), contributions, start, log_times.iter().sum(), config)
}

fn fit_core(
    n: usize,
    loglik: impl Fn(&TwoPieceParams) -> f64 + Sync,
    (mu0, sigma0): (f64, f64),
    log_time_sum: f64,
    config: &FitConfig,
) -> Result<FitResult> {
    let layout = config.layout();
    let k = 1 + layout.len();
    let mut warnings = Vec::new();
    if k >= 4 && n < 10 {
        return Err(Error::domain(format!(
            "{n} observations are too few for a {k}-parameter fit"
        )));
    }
    if n < 30 {
        warnings.push(format!("only {n} observations; estimates may be unreliable"));
    }

    let mut x0 = vec![mu0];
    x0.extend(layout.start(sigma0, config.delta));
    let mut steps = vec![0.5 * sigma0];
    steps.extend(layout.steps());

    let objective = |x: &[f64]| match layout.build(x[0], &x[1..]) {
        Ok(tp) => -loglik(&tp),
        Err(_) => f64::INFINITY,
    };
    let best = engine::multistart(objective, &x0, &steps, config.search());
    if !best.value.is_finite() {
        return Err(Error::domain("likelihood is zero at every evaluated point"));
    }
    let tp = layout.build(best.x[0], &best.x[1..])?;
    let params = LtpParams::from(tp);
    let loglik_log_time = -best.value;
    let loglik = loglik_log_time - log_time_sum;
    let effectively_normal = config.baseline == BaselineKind::StudentT
        && params.baseline().delta().is_some_and(|d| d > EFFECTIVELY_NORMAL_DF);
    if effectively_normal {
        warnings.push(format!(
            "degrees of freedom above {EFFECTIVELY_NORMAL_DF}: the fit is effectively normal"
        ));
    }
    Ok(FitResult {
        config: *config,
        params,
        loglik,
        aic: aic(k, loglik),
        loglik_log_time,
        aic_log_time: aic(k, loglik_log_time),
        n_params: k,
        n_obs: n,
        converged: best.converged,
        iterations: best.iterations,
        effectively_normal,
        warnings,
        profile_cis: Vec::new(),
        internal: best.x,
    })
}

fn negative_loglik(layout: &ShapeLayout, data: &[Observation], x: &[f64]) -> f64 {
    match layout.build(x[0], &x[1..]) {
        Ok(tp) => -sum_contributions(&tp, data),
        Err(_) => f64::INFINITY,
    }
}

/// Median and scaled MAD of the representative log times.
pub(crate) fn robust_start(data: &[Observation]) -> (f64, f64) {
    let mut logs: Vec<f64> = data.iter().map(Observation::representative_log_time).collect();
    robust_log_start(&mut logs)
}

fn robust_log_start(logs: &mut [f64]) -> (f64, f64) {
    let med = median(logs);
    let mut dev: Vec<f64> = logs.iter().map(|x| (x - med).abs()).collect();
    let mad = 1.4826 * median(&mut dev);
    let sigma = if mad > 1e-8 {
        mad
    } else {
        let n = logs.len() as f64;
        let mean = logs.iter().sum::<f64>() / n;
        let sd = (logs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
        if sd > 1e-8 {
            sd
        } else {
            1.0
        }
    };
    (med, sigma)
}

pub(crate) fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Profile-likelihood interval for one parameter: the set where the
/// re-maximised relative likelihood stays above `level`.
pub fn profile_ci(
    data: &[Observation],
    fit: &FitResult,
    name: &str,
    level: f64,
) -> Result<ProfileInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("level must lie in (0, 1), got {level}")));
    }
    let names = parameter_names(&fit.config);
    let index = names.iter().position(|n| *n == name).ok_or_else(|| {
        Error::domain(format!(
            "unknown parameter `{name}`; expected one of {}",
            names.join(", ")
        ))
    })?;
    check_dataset(data)?;
    let layout = fit.config.layout();
    let nm = engine::profile_options(fit.config.search());
    let mut steps = vec![0.5 * fit.params.sigma()];
    steps.extend(layout.steps());

    let inner = |j: usize, t: f64, warm: &[f64]| {
        let free: Vec<usize> = (0..warm.len()).filter(|&i| i != j).collect();
        let assemble = |y: &[f64]| {
            let mut x = warm.to_vec();
            x[j] = t;
            for (&i, &v) in free.iter().zip(y) {
                x[i] = v;
            }
            x
        };
        let objective = |y: &[f64]| negative_loglik(&layout, data, &assemble(y));
        let y0: Vec<f64> = free.iter().map(|&i| warm[i]).collect();
        let st: Vec<f64> = free.iter().map(|&i| 0.2 * steps[i]).collect();
        let m = engine::polished(&objective, &y0, &st, nm);
        (m.value, assemble(&m.x))
    };

    // refine the optimum first so the profile starts exactly at its peak
    let full = |x: &[f64]| negative_loglik(&layout, data, x);
    let small: Vec<f64> = steps.iter().map(|s| 0.05 * s).collect();
    let peak = engine::polished(&full, &fit.internal, &small, nm);
    let (estimate, min_value) = if peak.value < -fit.loglik_log_time {
        (peak.x, peak.value)
    } else {
        (fit.internal.clone(), -fit.loglik_log_time)
    };

    let (lo, hi) = engine::profile_bounds(inner, index, &estimate, min_value, -level.ln())?;
    let natural = |v: f64| {
        if index == 0 {
            v
        } else {
            layout.to_natural(name, v)
        }
    };
    Ok(ProfileInterval {
        name: name.to_string(),
        estimate: natural(estimate[index]),
        lower: natural(lo.value),
        upper: natural(hi.value),
        level,
        lower_open: lo.open,
        upper_open: hi.open,
    })
}

/// Re-maximised relative likelihood `L_p(θⱼ = value) / L(θ̂)`.
pub fn profile_relative_likelihood(
    data: &[Observation],
    fit: &FitResult,
    name: &str,
    value: f64,
) -> Result<f64> {
    let names = parameter_names(&fit.config);
    let index = names
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| Error::domain(format!("unknown parameter `{name}`")))?;
    let layout = fit.config.layout();
    let t = if index == 0 {
        value
    } else {
        layout.to_internal(name, value)
    };
    let nm = engine::profile_options(fit.config.search());
    let free: Vec<usize> = (0..fit.internal.len()).filter(|&i| i != index).collect();
    let assemble = |y: &[f64]| {
        let mut x = fit.internal.clone();
        x[index] = t;
        for (&i, &v) in free.iter().zip(y) {
            x[i] = v;
        }
        x
    };
    let objective = |y: &[f64]| negative_loglik(&layout, data, &assemble(y));
    let y0: Vec<f64> = free.iter().map(|&i| fit.internal[i]).collect();
    let st = vec![0.05; y0.len()];
    let m = engine::polished(&objective, &y0, &st, nm);
    Ok((-(fit.loglik_log_time + m.value)).exp())
}

/// Likelihood-ratio test between a submodel and the model containing it.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodRatio {
    pub restricted: usize,
    pub full: usize,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    /// Fits sorted by ascending AIC.
    pub ranked: Vec<FitResult>,
    /// Indices refer to the input configuration list.
    pub tests: Vec<LikelihoodRatio>,
    /// `order[i]` is the input index of `ranked[i]`.
    pub order: Vec<usize>,
}

/// Fits every configuration, ranks by AIC and runs likelihood-ratio tests
/// for the declared `(restricted, full)` pairs.
pub fn compare_models(
    data: &[Observation],
    configs: &[FitConfig],
    nested: &[(usize, usize)],
) -> Result<Comparison> {
    if configs.is_empty() {
        return Err(Error::domain("no models to compare"));
    }
    let fits: Vec<FitResult> = configs
        .par_iter()
        .map(|c| fit_mle(data, c))
        .collect::<Result<_>>()?;
    let mut tests = Vec::with_capacity(nested.len());
    for &(r, f) in nested {
        let (small, big) = match (fits.get(r), fits.get(f)) {
            (Some(s), Some(b)) => (s, b),
            _ => return Err(Error::domain(format!("nested pair ({r}, {f}) out of range"))),
        };
        if big.n_params <= small.n_params {
            return Err(Error::domain(format!(
                "model {f} does not have more parameters than model {r}"
            )));
        }
        let statistic = (2.0 * (big.loglik - small.loglik)).max(0.0);
        let df = big.n_params - small.n_params;
        let chi = ChiSquared::new(df as f64).map_err(|e| Error::domain(e.to_string()))?;
        tests.push(LikelihoodRatio {
            restricted: r,
            full: f,
            statistic,
            df,
            p_value: chi.sf(statistic),
        });
    }
    let mut order: Vec<usize> = (0..fits.len()).collect();
    order.sort_by(|&i, &j| fits[i].aic.total_cmp(&fits[j].aic));
    let ranked = order.iter().map(|&i| fits[i].clone()).collect();
    Ok(Comparison {
        ranked,
        tests,
        order,
    })
}
