//! Monte-Carlo study of the maximum-likelihood estimators: repeated
//! sampling, fitting and bias/variance/RMSE summaries.
//!
//! Every replicate draws from its own ChaCha8 stream keyed by the scenario
//! seed, the sample size and the replicate index, and summaries reduce in
//! index order, so results do not depend on the thread count.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::aft::{aft_fit, AftDataset};
use crate::baselines::{Baseline, BaselineKind};
use crate::error::{Error, Result};
use crate::inference::{fit_mle_log_scale, FitConfig, Observation};
use crate::ltp::LtpParams;
use crate::twopiece::{ParamKind, Parameterisation, TwoPieceParams};

/// Scale on which the censoring threshold is compared with the response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensorScale {
    /// `y > c` is censored at `c`.
    Time,
    /// `log y > c` is censored at `e^c`.
    LogTime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Censoring {
    pub threshold: f64,
    pub scale: CensorScale,
}

impl Censoring {
    fn apply(&self, y: f64) -> Observation {
        let limit = match self.scale {
            CensorScale::Time => self.threshold,
            CensorScale::LogTime => self.threshold.exp(),
        };
        if y > limit {
            Observation::RightCensored(limit)
        } else {
            Observation::Exact(y)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    /// i.i.d. samples from an LTP law.
    Distribution { truth: LtpParams },
    /// `log y = β₀ + β₁x₁ + … + ε` with covariates `|Z|·covariate_scale`.
    Regression {
        beta: Vec<f64>,
        error: TwoPieceParams,
        covariate_scale: f64,
        censoring: Option<Censoring>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    /// Model fitted to each replicate; its seed is replaced per replicate.
    pub fit: FitConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::domain(format!("{}: replications must be at least 1", self.name)));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return Err(Error::domain(format!("{}: sample sizes must be positive", self.name)));
        }
        if let ScenarioKind::Regression {
            beta,
            covariate_scale,
            censoring,
            ..
        } = &self.kind
        {
            if beta.is_empty() {
                return Err(Error::domain(format!("{}: beta is empty", self.name)));
            }
            if !(*covariate_scale > 0.0) {
                return Err(Error::domain(format!("{}: covariate_scale must be positive", self.name)));
            }
            if let Some(c) = censoring {
                if c.scale == CensorScale::Time && !(c.threshold > 0.0) {
                    return Err(Error::domain(format!(
                        "{}: censoring threshold must be positive",
                        self.name
                    )));
                }
            }
        }
        self.fit.validate()
    }

    /// Names and true values of the estimated parameters.
    pub fn truth(&self) -> Vec<(String, f64)> {
        let layout = self.fit.layout();
        match &self.kind {
            ScenarioKind::Distribution { truth } => {
                let mut out = vec![("mu".to_string(), truth.mu())];
                out.extend(
                    layout
                        .natural_values(truth.log_law())
                        .into_iter()
                        .map(|(n, v)| (n.to_string(), v)),
                );
                out
            }
            ScenarioKind::Regression { beta, error, .. } => {
                let mut out: Vec<(String, f64)> = beta
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (format!("beta{}", i + 1), *b))
                    .collect();
                out.extend(
                    layout
                        .natural_values(error)
                        .into_iter()
                        .map(|(n, v)| (n.to_string(), v)),
                );
                out
            }
        }
    }
}

/// One summary line: a parameter at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: String,
    pub parameter: String,
    pub n: usize,
    pub bias: f64,
    pub variance: f64,
    pub rmse: f64,
    pub n_failed: usize,
    /// Mean fraction of censored responses (regression scenarios).
    pub censored_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn get(&self, parameter: &str, n: usize) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.parameter == parameter && r.n == n)
    }

    pub fn extend(&mut self, other: SummaryTable) {
        self.rows.extend(other.rows);
    }

    /// CSV with a header line; floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario,parameter,n,bias,variance,rmse,n_failed,censored_fraction\n");
        for r in &self.rows {
            let cf = r
                .censored_fraction
                .map(|c| format!("{c:.16e}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{:.16e},{:.16e},{:.16e},{},{}",
                r.scenario, r.parameter, r.n, r.bias, r.variance, r.rmse, r.n_failed, cf
            );
        }
        out
    }
}

/// Bias, variance and RMSE of one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub bias: f64,
    pub variance: f64,
    pub rmse: f64,
}

/// Column-wise summaries of an estimate matrix (one row per replicate)
/// against the truth, with the population variance so that
/// `rmse² = bias² + variance`.
pub fn summarize(estimates: &[Vec<f64>], truth: &[f64]) -> Result<Vec<Moments>> {
    if estimates.is_empty() {
        return Err(Error::domain("no estimates to summarise"));
    }
    if estimates.iter().any(|row| row.len() != truth.len()) {
        return Err(Error::domain("estimate rows do not match the parameter count"));
    }
    let n = estimates.len() as f64;
    Ok(truth
        .iter()
        .enumerate()
        .map(|(c, &theta)| {
            let mean = estimates.iter().map(|r| r[c]).sum::<f64>() / n;
            let variance = estimates.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n;
            let bias = mean - theta;
            Moments {
                bias,
                variance,
                rmse: (bias * bias + variance).sqrt(),
            }
        })
        .collect())
}

struct Replicate {
    estimates: Option<Vec<f64>>,
    censored: f64,
}

fn replicate_rng(seed: u64, size_index: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((size_index as u64) << 40) | rep as u64);
    rng
}

fn fit_config_for(s: &Scenario, rep: usize) -> FitConfig {
    let mut cfg = s.fit;
    cfg.seed = s.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(rep as u64);
    cfg
}

fn run_replicates<F>(s: &Scenario, one: F) -> Result<SummaryTable>
where
    F: Fn(usize, usize, usize) -> Replicate + Sync,
{
    s.validate()?;
    let truth = s.truth();
    let values: Vec<f64> = truth.iter().map(|(_, v)| *v).collect();
    let mut table = SummaryTable::default();
    for (si, &n) in s.sample_sizes.iter().enumerate() {
        let reps: Vec<Replicate> = (0..s.replications)
            .into_par_iter()
            .map(|r| one(si, n, r))
            .collect();
        let ok: Vec<Vec<f64>> = reps.iter().filter_map(|r| r.estimates.clone()).collect();
        let n_failed = reps.len() - ok.len();
        let censored_fraction = match s.kind {
            ScenarioKind::Regression { .. } => {
                Some(reps.iter().map(|r| r.censored).sum::<f64>() / reps.len() as f64)
            }
            ScenarioKind::Distribution { .. } => None,
        };
        let moments = if ok.is_empty() {
            vec![
                Moments {
                    bias: f64::NAN,
                    variance: f64::NAN,
                    rmse: f64::NAN,
                };
                values.len()
            ]
        } else {
            summarize(&ok, &values)?
        };
        for ((name, _), m) in truth.iter().zip(moments) {
            table.rows.push(SummaryRow {
                scenario: s.name.clone(),
                parameter: name.clone(),
                n,
                bias: m.bias,
                variance: m.variance,
                rmse: m.rmse,
                n_failed,
                censored_fraction,
            });
        }
    }
    Ok(table)
}

/// Samples from the LTP law, refits it, and summarises the estimates.
pub fn run_distribution_scenario(s: &Scenario) -> Result<SummaryTable> {
    let ScenarioKind::Distribution { truth } = &s.kind else {
        return Err(Error::domain(format!("{} is not a distribution scenario", s.name)));
    };
    run_replicates(s, |si, n, rep| {
        let mut rng = replicate_rng(s.seed, si, rep);
        // log scale: heavy-tailed draws overflow once exponentiated
        let data: Vec<f64> = (0..n).map(|_| truth.log_law().sample(&mut rng)).collect();
        let estimates = fit_mle_log_scale(&data, &fit_config_for(s, rep))
            .ok()
            .filter(|f| f.converged)
            .map(|f| f.estimates().into_iter().map(|(_, v)| v).collect());
        Replicate {
            estimates,
            censored: 0.0,
        }
    })
}

/// Simulates censored log-linear regressions, refits them, and summarises.
pub fn run_regression_scenario(s: &Scenario) -> Result<SummaryTable> {
    let ScenarioKind::Regression {
        beta,
        error,
        covariate_scale,
        censoring,
    } = &s.kind
    else {
        return Err(Error::domain(format!("{} is not a regression scenario", s.name)));
    };
    let normal = Baseline::normal();
    let p = beta.len() - 1;
    let names: Vec<String> = (1..=p).map(|i| format!("x{i}")).collect();
    run_replicates(s, |si, n, rep| {
        let mut rng = replicate_rng(s.seed, si, rep);
        let mut covs = Vec::with_capacity(n);
        let mut obs = Vec::with_capacity(n);
        let mut censored = 0usize;
        for _ in 0..n {
            let x: Vec<f64> = (0..p)
                .map(|_| normal.sample(&mut rng).abs() * covariate_scale)
                .collect();
            let lp = beta[0] + x.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>();
            let y = (lp + error.sample(&mut rng)).exp();
            let o = match censoring {
                Some(c) => c.apply(y),
                None => Observation::Exact(y),
            };
            censored += usize::from(!o.is_exact());
            covs.push(x);
            obs.push(o);
        }
        let estimates = AftDataset::new(names.clone(), covs, obs, true)
            .and_then(|d| aft_fit(&d, &fit_config_for(s, rep)))
            .ok()
            .filter(|f| f.converged)
            .map(|f| f.estimates().into_iter().map(|(_, v)| v).collect());
        Replicate {
            estimates,
            censored: censored as f64 / n as f64,
        }
    })
}

pub fn run_scenario(s: &Scenario) -> Result<SummaryTable> {
    match s.kind {
        ScenarioKind::Distribution { .. } => run_distribution_scenario(s),
        ScenarioKind::Regression { .. } => run_regression_scenario(s),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: String,
    baseline: String,
    #[serde(default)]
    param: Option<String>,
    #[serde(default)]
    mu: Option<f64>,
    sigma: f64,
    gamma: f64,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    beta: Option<Vec<f64>>,
    #[serde(default)]
    covariate_scale: Option<f64>,
    #[serde(default)]
    censor_threshold: Option<f64>,
    #[serde(default)]
    censor_scale: Option<String>,
    sample_sizes: Vec<usize>,
    replications: usize,
    seed: u64,
    #[serde(default)]
    restarts: Option<usize>,
    #[serde(default)]
    fix_gamma: Option<f64>,
}

impl RawScenario {
    fn into_scenario(self, name: &str) -> Result<Scenario> {
        let domain = |m: String| Error::domain(format!("{name}: {m}"));
        let baseline_kind: BaselineKind = self.baseline.parse().map_err(|e: Error| domain(e.to_string()))?;
        let param_kind: ParamKind = match &self.param {
            Some(p) => p.parse().map_err(|e: Error| domain(e.to_string()))?,
            None => ParamKind::EpsilonSkew,
        };
        let param = match param_kind {
            ParamKind::EpsilonSkew => Parameterisation::EpsilonSkew { gamma: self.gamma },
            ParamKind::InverseScale => Parameterisation::InverseScale { gamma: self.gamma },
            ParamKind::RawScales => return Err(domain("raw scales are not supported here".into())),
        };
        let baseline = Baseline::new(baseline_kind, self.delta)?;
        let mut fit = FitConfig::new(baseline_kind).with_param(param_kind);
        fit.fixed_gamma = self.fix_gamma;
        if let Some(r) = self.restarts {
            fit.restarts = r;
        }
        let kind = match self.kind.as_str() {
            "distribution" => {
                if self.beta.is_some() || self.censor_threshold.is_some() {
                    return Err(domain("beta and censoring apply to regression scenarios".into()));
                }
                let tp = TwoPieceParams::new(self.mu.unwrap_or(0.0), self.sigma, param, baseline)?;
                ScenarioKind::Distribution {
                    truth: LtpParams::from(tp),
                }
            }
            "regression" => {
                if self.mu.is_some() {
                    return Err(domain("regression errors are located at 0; drop `mu`".into()));
                }
                let beta = self.beta.ok_or_else(|| domain("regression needs `beta`".into()))?;
                let scale = match self.censor_scale.as_deref() {
                    None | Some("time") => CensorScale::Time,
                    Some("log") | Some("log_time") => CensorScale::LogTime,
                    Some(other) => {
                        return Err(domain(format!("censor_scale must be time or log, got `{other}`")))
                    }
                };
                ScenarioKind::Regression {
                    beta,
                    error: TwoPieceParams::new(0.0, self.sigma, param, baseline)?,
                    covariate_scale: self.covariate_scale.unwrap_or(1.0 / 3.0),
                    censoring: self.censor_threshold.map(|threshold| Censoring { threshold, scale }),
                }
            }
            other => return Err(domain(format!("kind must be distribution or regression, got `{other}`"))),
        };
        let s = Scenario {
            name: name.to_string(),
            kind,
            sample_sizes: self.sample_sizes,
            replications: self.replications,
            seed: self.seed,
            fit,
        };
        s.validate()?;
        Ok(s)
    }
}

/// Parses scenario definitions: one TOML table per scenario, in file order.
pub fn parse_scenarios(text: &str, path: &Path) -> Result<Vec<Scenario>> {
    let parse_error = |e: toml::de::Error| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
            .unwrap_or(0);
        Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.message().to_string(),
        }
    };
    let table: toml::Table = text.parse().map_err(parse_error)?;
    let mut out = Vec::with_capacity(table.len());
    for (name, value) in table {
        let raw: RawScenario = value.try_into().map_err(|e: toml::de::Error| Error::Input {
            path: path.to_path_buf(),
            message: format!("scenario `{name}`: {}", e.message()),
        })?;
        out.push(raw.into_scenario(&name).map_err(|e| Error::Input {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?);
    }
    if out.is_empty() {
        return Err(Error::Input {
            path: path.to_path_buf(),
            message: "no scenarios defined".into(),
        });
    }
    Ok(out)
}

pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenarios(&text, path)
}
