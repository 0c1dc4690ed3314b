//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on input or domain errors, 2 when an
//! optimiser stopped without meeting its convergence criterion (the report
//! is still written).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::aft::{aft_fit, aft_location, aft_profile_ci, Centring};
use crate::baselines::{Baseline, BaselineKind};
use crate::classical::fit_weibull;
use crate::dataset::{read_observations, Table};
use crate::error::{Error, Result};
use crate::inference::{compare_models, fit_mle, profile_ci, FitConfig, Observation, PROFILE_LEVEL_95};
use crate::ltp::LtpParams;
use crate::predict::{prediction_interval, survival_curve, RemainingLifeQuery};
use crate::report::{aft_from_report, aft_report, fit_report, format_f64, ltp_from_report, Report};
use crate::simharness::{load_scenarios, run_scenario, SummaryTable};
use crate::twopiece::{ParamKind, Parameterisation, TwoPieceParams};

#[derive(Debug, Parser)]
#[command(name = "ltpsurv", version, about = "Log two-piece lifetime models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit an LTP distribution to censored lifetimes.
    Fit(FitArgs),
    /// Fit several models and rank them by AIC.
    Compare(CompareArgs),
    /// Fit an accelerated failure time model with LTP errors.
    Aft(AftArgs),
    /// Remaining-life prediction intervals from a saved AFT report.
    Predict(PredictArgs),
    /// Run Monte-Carlo scenarios.
    Simulate(SimulateArgs),
    /// Tabulate hazard, density and distribution function on a log grid.
    Hazard(HazardArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Baseline family: normal, t, logistic, laplace, exppower or sas.
    #[arg(long, default_value = "normal")]
    pub baseline: BaselineKind,
    /// Skewness parameterisation: eps (epsilon-skew) or inv (inverse scale factors).
    #[arg(long, default_value = "eps")]
    pub param: ParamKind,
    /// Hold gamma at this value.
    #[arg(long)]
    pub fix_gamma: Option<f64>,
    /// Starting value of delta, or its fixed value with --fix-delta.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, requires = "delta")]
    pub fix_delta: bool,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

impl ModelArgs {
    fn config(&self) -> FitConfig {
        let mut cfg = FitConfig::new(self.baseline).with_param(self.param);
        cfg.fixed_gamma = self.fix_gamma;
        cfg.delta = self.delta;
        cfg.fit_delta = !self.fix_delta;
        cfg.restarts = self.restarts;
        cfg.seed = self.seed;
        cfg.max_iterations = self.max_iterations;
        cfg.tolerance = self.tolerance;
        cfg
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with `time` and `status` columns.
    pub data: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated parameters for profile-likelihood intervals.
    #[arg(long, value_delimiter = ',')]
    pub profile_ci: Vec<String>,
    /// Relative-likelihood cut for the intervals.
    #[arg(long, default_value_t = PROFILE_LEVEL_95)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub data: PathBuf,
    /// Models: a family name for the LTP model, `log-<family>` for the
    /// symmetric submodel, or `weibull`.
    #[arg(long, value_delimiter = ',', default_value = "log-normal,normal,t,sas")]
    pub models: Vec<String>,
    /// Report log-likelihoods of the log times instead of the times.
    #[arg(long)]
    pub log_scale: bool,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AftArgs {
    pub data: PathBuf,
    /// Comma-separated covariate columns.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Vec<String>,
    #[arg(long)]
    pub no_intercept: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    /// mean, median or quantile:<q>.
    #[arg(long, default_value = "median")]
    pub centring: String,
    #[arg(long, value_delimiter = ',')]
    pub profile_ci: Vec<String>,
    #[arg(long, default_value_t = PROFILE_LEVEL_95)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Report written by `aft`.
    #[arg(long)]
    pub model: PathBuf,
    /// CSV with `alive_at`, the model covariates and optionally `id`.
    pub subjects: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha2: f64,
    /// Subject id whose conditional survival curve is written to --curve-out.
    #[arg(long, requires = "curve_out")]
    pub curve: Option<String>,
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
    /// Curve end time; defaults to the upper prediction endpoint.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file: one TOML table per scenario.
    pub config: PathBuf,
    /// Override the replication count of every scenario.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Override the seed of every scenario.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HazardArgs {
    /// Report written by `fit`; overrides the parameter flags.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value = "normal")]
    pub baseline: BaselineKind,
    #[arg(long, default_value = "eps")]
    pub param: ParamKind,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Log-spaced grid `min:max:count`.
    #[arg(long, default_value = "0.01:100:200")]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotConverged,
}

impl Status {
    fn from_converged(c: bool) -> Self {
        if c {
            Status::Ok
        } else {
            Status::NotConverged
        }
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::NotConverged) => {
            eprintln!("warning: the optimiser did not converge; the best point found was reported");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Aft(a) => cmd_aft(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Hazard(a) => cmd_hazard(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Domain(message) => Error::Input {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    }
}

pub fn cmd_fit(a: &FitArgs) -> Result<Status> {
    let data = read_observations(&a.data)?;
    let mut fit = fit_mle(&data, &a.model.config()).map_err(|e| with_path(&a.data, e))?;
    for name in &a.profile_ci {
        let ci = profile_ci(&data, &fit, name, a.level)?;
        fit.profile_cis.push(ci);
    }
    for w in &fit.warnings {
        eprintln!("warning: {w}");
    }
    emit(a.out.as_deref(), &fit_report(&fit).to_string())?;
    Ok(Status::from_converged(fit.converged))
}

/// A model named on the `compare` command line.
#[derive(Debug, Clone, Copy, PartialEq)]
enum ModelSpec {
    Ltp(FitConfig),
    Weibull,
}

fn parse_model(token: &str, restarts: usize, seed: u64) -> Result<ModelSpec> {
    let t = token.trim().to_ascii_lowercase();
    if t == "weibull" {
        return Ok(ModelSpec::Weibull);
    }
    let (symmetric, family) = match t.as_str() {
        "lognormal" => (true, "normal"),
        _ => match t.strip_prefix("log-") {
            Some(f) => (true, f),
            None => (false, t.strip_prefix("ltp-").unwrap_or(&t)),
        },
    };
    let kind: BaselineKind = family.parse()?;
    let mut cfg = if symmetric {
        FitConfig::symmetric(kind)
    } else {
        FitConfig::new(kind)
    };
    cfg.restarts = restarts;
    cfg.seed = seed;
    Ok(ModelSpec::Ltp(cfg))
}

pub fn cmd_compare(a: &CompareArgs) -> Result<Status> {
    let data = read_observations(&a.data)?;
    let specs: Vec<ModelSpec> = a
        .models
        .iter()
        .map(|m| parse_model(m, a.restarts, a.seed))
        .collect::<Result<_>>()?;
    let configs: Vec<FitConfig> = specs
        .iter()
        .filter_map(|s| match s {
            ModelSpec::Ltp(c) => Some(*c),
            ModelSpec::Weibull => None,
        })
        .collect();
    // (label, loglik, k, converged)
    let mut rows: Vec<(String, f64, usize, bool)> = Vec::new();
    if !configs.is_empty() {
        let cmp = compare_models(&data, &configs, &[]).map_err(|e| with_path(&a.data, e))?;
        for f in cmp.ranked {
            let ll = if a.log_scale { f.loglik_log_time } else { f.loglik };
            rows.push((f.label(), ll, f.n_params, f.converged));
        }
    }
    if specs.contains(&ModelSpec::Weibull) {
        let w = fit_weibull(&data, a.seed).map_err(|e| with_path(&a.data, e))?;
        let shift = if a.log_scale { log_jacobian(&data) } else { 0.0 };
        rows.push(("Weibull".into(), w.loglik + shift, 2, w.converged));
    }
    let aic = |ll: f64, k: usize| 2.0 * k as f64 - 2.0 * ll;
    rows.sort_by(|x, y| aic(x.1, x.2).total_cmp(&aic(y.1, y.2)));
    let best = rows.first().map_or(0.0, |r| aic(r.1, r.2));
    let mut out = String::from("model,loglik,k,aic,delta_aic\n");
    for (label, ll, k, _) in &rows {
        let v = aic(*ll, *k);
        let _ = writeln!(out, "{label},{},{k},{},{}", format_f64(*ll), format_f64(v), format_f64(v - best));
    }
    emit(a.out.as_deref(), &out)?;
    Ok(Status::from_converged(rows.iter().all(|r| r.3)))
}

fn log_jacobian(data: &[Observation]) -> f64 {
    data.iter()
        .filter_map(|o| match o {
            Observation::Exact(t) => Some(t.ln()),
            _ => None,
        })
        .sum()
}

fn parse_centring(s: &str) -> Result<Centring> {
    match s {
        "mean" => Ok(Centring::Mean),
        "median" => Ok(Centring::Median),
        _ => match s.strip_prefix("quantile:").map(str::parse::<f64>) {
            Some(Ok(q)) if q > 0.0 && q < 1.0 => Ok(Centring::Quantile(q)),
            _ => Err(Error::domain(format!(
                "centring must be mean, median or quantile:<q> with 0 < q < 1, got `{s}`"
            ))),
        },
    }
}

pub fn cmd_aft(a: &AftArgs) -> Result<Status> {
    let centring = parse_centring(&a.centring)?;
    let table = Table::read(&a.data)?;
    let data = table.aft_dataset(&a.covariates, !a.no_intercept)?;
    let mut fit = aft_fit(&data, &a.model.config()).map_err(|e| with_path(&a.data, e))?;
    for name in &a.profile_ci {
        let ci = aft_profile_ci(&data, &fit, name, a.level)?;
        fit.profile_cis.push(ci);
    }
    for w in &fit.warnings {
        eprintln!("warning: {w}");
    }
    emit(a.out.as_deref(), &aft_report(&fit, centring).to_string())?;
    Ok(Status::from_converged(fit.converged))
}

pub fn cmd_predict(a: &PredictArgs) -> Result<Status> {
    let report = Report::load(&a.model)?;
    let model = aft_from_report(&report)?;
    let centring = parse_centring(report.get("centring").unwrap_or("median"))?;
    let table = Table::read(&a.subjects)?;
    let alive = table.numeric("alive_at")?;
    let covs = table.covariates(&model.covariates)?;
    let ids = table.ids();
    let mut out = String::from("id,alive_at,t_lower,t_upper,upper_open,centre\n");
    let mut curve_query = None;
    for ((id, t), x) in ids.iter().zip(&alive).zip(&covs) {
        let row = model.design_row(x);
        let q = RemainingLifeQuery::new(row.clone(), *t).with_alphas(a.alpha1, a.alpha2);
        let pi = prediction_interval(&model.params, &q).map_err(|e| with_path(&a.subjects, e))?;
        let centre = aft_location(&model.params, &row, centring)
            .map(|m| format_f64(m.exp()))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{id},{},{},{},{},{centre}",
            format_f64(*t),
            format_f64(pi.lower),
            format_f64(pi.upper),
            pi.upper_open
        );
        if a.curve.as_deref() == Some(id.as_str()) {
            curve_query = Some((q, pi.upper));
        }
    }
    emit(a.out.as_deref(), &out)?;
    if let (Some(id), Some(path)) = (&a.curve, &a.curve_out) {
        let (q, upper) = curve_query.ok_or_else(|| Error::Input {
            path: a.subjects.clone(),
            message: format!("no subject with id `{id}`"),
        })?;
        let horizon = match a.horizon {
            Some(h) => h,
            None if upper.is_finite() => upper,
            None => {
                return Err(Error::domain("the prediction interval is open; pass --horizon"))
            }
        };
        let curve = survival_curve(&model.params, &q, horizon, a.points)?;
        let mut text = String::from("t,survival\n");
        for (t, s) in curve {
            let _ = writeln!(text, "{},{}", format_f64(t), format_f64(s));
        }
        emit(Some(path), &text)?;
    }
    Ok(Status::Ok)
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<Status> {
    let mut scenarios = load_scenarios(&a.config)?;
    for s in &mut scenarios {
        if let Some(r) = a.reps {
            s.replications = r;
        }
        if let Some(seed) = a.seed {
            s.seed = seed;
        }
    }
    let run_all = || -> Result<SummaryTable> {
        let mut table = SummaryTable::default();
        for s in &scenarios {
            table.extend(run_scenario(s)?);
        }
        Ok(table)
    };
    let table = match a.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::domain(e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };
    emit(a.out.as_deref(), &table.to_csv())?;
    Ok(Status::Ok)
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::domain(format!("grid must be min:max:count with 0 < min < max, got `{s}`"));
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(bad());
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

pub fn cmd_hazard(a: &HazardArgs) -> Result<Status> {
    let law = match &a.model {
        Some(path) => ltp_from_report(&Report::load(path)?)?,
        None => {
            let baseline = Baseline::new(a.baseline, a.delta.or(a.baseline.default_delta()))?;
            let param = match a.param {
                ParamKind::EpsilonSkew => Parameterisation::EpsilonSkew { gamma: a.gamma },
                ParamKind::InverseScale => Parameterisation::InverseScale { gamma: a.gamma },
                ParamKind::RawScales => {
                    return Err(Error::domain("use eps or inv parameters for hazard grids"))
                }
            };
            LtpParams::from(TwoPieceParams::new(a.mu, a.sigma, param, baseline)?)
        }
    };
    let mut out = String::from("y,hazard,pdf,cdf\n");
    for y in parse_grid(&a.grid)? {
        let h = law.hazard(y).unwrap_or(f64::INFINITY);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_f64(y),
            format_f64(h),
            format_f64(law.pdf(y)?),
            format_f64(law.cdf(y)?)
        );
    }
    emit(a.out.as_deref(), &out)?;
    Ok(Status::Ok)
}
