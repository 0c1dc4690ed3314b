//! Flat `key = value` reports for fitted models.
//!
//! Floats are written with 17 significant digits, so reloading a report
//! recovers the fitted parameters bit for bit.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::aft::{AftFit, AftParams, Centring, INTERCEPT};
use crate::baselines::{Baseline, BaselineKind};
use crate::error::{Error, Result};
use crate::inference::{FitResult, ProfileInterval};
use crate::ltp::LtpParams;
use crate::twopiece::{ParamKind, Parameterisation, TwoPieceParams};

/// Formats a float so that parsing it gives back the same value.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
    source: Option<PathBuf>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, format_f64(value));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Last value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find_map(|(k, v)| (k == key).then_some(v.as_str()))
    }

    fn error(&self, message: String) -> Error {
        Error::Input {
            path: self.source.clone().unwrap_or_else(|| PathBuf::from("<report>")),
            message,
        }
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| self.error(format!("missing key `{key}`")))
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| self.error(format!("`{key}` is not a number: `{raw}`")))
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "empty key".into(),
                });
            }
            entries.push((k.to_string(), v.trim().to_string()));
        }
        Ok(Self {
            entries,
            source: Some(path.to_path_buf()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

fn push_law(r: &mut Report, tp: &TwoPieceParams) {
    let base = tp.baseline();
    r.push("baseline", base.kind().token());
    let param = tp.parameterisation();
    r.push("param", param.kind().token());
    match param {
        Parameterisation::RawScales { sigma1, sigma2 } => {
            r.push_f64("sigma1", sigma1);
            r.push_f64("sigma2", sigma2);
        }
        Parameterisation::EpsilonSkew { gamma } | Parameterisation::InverseScale { gamma } => {
            r.push_f64("sigma", tp.sigma());
            r.push_f64("gamma", gamma);
        }
    }
    if let Some(d) = base.delta() {
        r.push_f64("delta", d);
    }
}

fn read_law(r: &Report, mu: f64) -> Result<TwoPieceParams> {
    let kind: BaselineKind = r.require("baseline")?.parse()?;
    let delta = if kind.has_delta() {
        Some(r.get_f64("delta")?)
    } else {
        None
    };
    let baseline = Baseline::new(kind, delta)?;
    let param_kind: ParamKind = r.require("param")?.parse()?;
    let (sigma, param) = match param_kind {
        ParamKind::RawScales => (
            1.0,
            Parameterisation::RawScales {
                sigma1: r.get_f64("sigma1")?,
                sigma2: r.get_f64("sigma2")?,
            },
        ),
        ParamKind::EpsilonSkew => (
            r.get_f64("sigma")?,
            Parameterisation::EpsilonSkew {
                gamma: r.get_f64("gamma")?,
            },
        ),
        ParamKind::InverseScale => (
            r.get_f64("sigma")?,
            Parameterisation::InverseScale {
                gamma: r.get_f64("gamma")?,
            },
        ),
    };
    TwoPieceParams::new(mu, sigma, param, baseline)
}

fn push_intervals(r: &mut Report, cis: &[ProfileInterval]) {
    for ci in cis {
        let key = |s: &str| format!("ci.{}.{s}", ci.name);
        r.push_f64(key("level"), ci.level);
        r.push_f64(key("lower"), ci.lower);
        r.push_f64(key("upper"), ci.upper);
        if ci.lower_open {
            r.push(key("lower_open"), true);
        }
        if ci.upper_open {
            r.push(key("upper_open"), true);
        }
    }
}

fn push_common(
    r: &mut Report,
    loglik: f64,
    aic: f64,
    loglik_log_time: f64,
    aic_log_time: f64,
    n_params: usize,
    n_obs: usize,
) {
    r.push_f64("loglik", loglik);
    r.push_f64("aic", aic);
    r.push_f64("loglik_log_time", loglik_log_time);
    r.push_f64("aic_log_time", aic_log_time);
    r.push("n_params", n_params);
    r.push("n_obs", n_obs);
}

/// Report for a distribution fit.
pub fn fit_report(fit: &FitResult) -> Report {
    let mut r = Report::new();
    r.push("kind", "ltp");
    r.push("model", fit.label());
    r.push_f64("mu", fit.params.mu());
    push_law(&mut r, fit.params.log_law());
    push_common(
        &mut r,
        fit.loglik,
        fit.aic,
        fit.loglik_log_time,
        fit.aic_log_time,
        fit.n_params,
        fit.n_obs,
    );
    r.push("converged", fit.converged);
    r.push("iterations", fit.iterations);
    r.push("effectively_normal", fit.effectively_normal);
    push_intervals(&mut r, &fit.profile_cis);
    for w in &fit.warnings {
        r.push("warning", w);
    }
    r
}

/// Rebuilds the LTP law stored in a distribution-fit report.
pub fn ltp_from_report(r: &Report) -> Result<LtpParams> {
    if r.require("kind")? != "ltp" {
        return Err(r.error("not a distribution-fit report".into()));
    }
    Ok(LtpParams::from(read_law(r, r.get_f64("mu")?)?))
}

fn centring_token(c: Centring) -> String {
    match c {
        Centring::Mean => "mean".into(),
        Centring::Median => "median".into(),
        Centring::Quantile(q) => format!("quantile:{}", format_f64(q)),
    }
}

/// Report for an AFT fit; `centring` selects the reported centring constant.
pub fn aft_report(fit: &AftFit, centring: Centring) -> Report {
    let mut r = Report::new();
    r.push("kind", "aft");
    r.push("model", fit.label());
    let intercept = fit.names.first().is_some_and(|n| n == INTERCEPT);
    r.push("intercept", intercept);
    let covs: Vec<&str> = fit
        .names
        .iter()
        .filter(|n| n.as_str() != INTERCEPT)
        .map(String::as_str)
        .collect();
    r.push("covariates", covs.join(","));
    for (name, b) in fit.names.iter().zip(fit.params.beta()) {
        r.push_f64(format!("beta.{name}"), *b);
    }
    push_law(&mut r, fit.params.error());
    push_common(
        &mut r,
        fit.loglik,
        fit.aic,
        fit.loglik_log_time,
        fit.aic_log_time,
        fit.n_params,
        fit.n_obs,
    );
    r.push("converged", fit.converged);
    r.push("iterations", fit.iterations);
    r.push("effectively_normal", fit.effectively_normal);
    r.push("centring", centring_token(centring));
    match crate::aft::centring_constant(&fit.params, centring) {
        Ok(m) => r.push_f64("centring_constant", m),
        Err(_) => r.push("centring_constant", "divergent"),
    }
    match fit.centring_mean {
        Some(m) => r.push_f64("centring_mean", m),
        None => r.push("centring_mean", "divergent"),
    }
    r.push_f64("centring_median", fit.centring_median);
    push_intervals(&mut r, &fit.profile_cis);
    for w in &fit.warnings {
        r.push("warning", w);
    }
    r
}

/// A fitted AFT model as stored in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct AftModel {
    pub params: AftParams,
    /// Covariate names, without the intercept.
    pub covariates: Vec<String>,
    pub intercept: bool,
}

impl AftModel {
    /// Full design row for covariate values given in `covariates` order.
    pub fn design_row(&self, values: &[f64]) -> Vec<f64> {
        let mut row = Vec::with_capacity(values.len() + 1);
        if self.intercept {
            row.push(1.0);
        }
        row.extend_from_slice(values);
        row
    }
}

pub fn aft_from_report(r: &Report) -> Result<AftModel> {
    if r.require("kind")? != "aft" {
        return Err(r.error("not an AFT report".into()));
    }
    let intercept = match r.require("intercept")? {
        "true" => true,
        "false" => false,
        other => return Err(r.error(format!("`intercept` must be true or false, got `{other}`"))),
    };
    let covariates: Vec<String> = r
        .require("covariates")?
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    let mut beta = Vec::with_capacity(covariates.len() + 1);
    if intercept {
        beta.push(r.get_f64(&format!("beta.{INTERCEPT}"))?);
    }
    for c in &covariates {
        beta.push(r.get_f64(&format!("beta.{c}"))?);
    }
    let params = AftParams::new(beta, read_law(r, 0.0)?)?;
    Ok(AftModel {
        params,
        covariates,
        intercept,
    })
}
