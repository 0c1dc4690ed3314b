//! Accelerated failure time regression with log two-piece errors:
//! `log Tⱼ = xⱼᵀβ + εⱼ`, where `εⱼ` follows a two-piece law located at 0.

use nalgebra::{DMatrix, DVector};

use crate::baselines::{Baseline, BaselineKind};
use crate::engine::{self, ShapeLayout};
use crate::error::{Error, Result};
use crate::inference::{
    aic, check_dataset, exact_log_time_sum, median, FitConfig, Observation, ProfileInterval,
    EFFECTIVELY_NORMAL_DF,
};
use crate::ltp::LtpParams;
use crate::twopiece::{Parameterisation, TwoPieceParams};

/// Name given to the constant column.
pub const INTERCEPT: &str = "intercept";

/// Covariates and censored responses for an AFT fit.
#[derive(Debug, Clone, PartialEq)]
pub struct AftDataset {
    names: Vec<String>,
    covariates: Vec<Vec<f64>>,
    observations: Vec<Observation>,
    intercept: bool,
}

impl AftDataset {
    /// `covariates[j]` is the covariate vector of row `j`, without the
    /// constant; `intercept` prepends one.
    pub fn new(
        names: Vec<String>,
        covariates: Vec<Vec<f64>>,
        observations: Vec<Observation>,
        intercept: bool,
    ) -> Result<Self> {
        check_dataset(&observations)?;
        if covariates.len() != observations.len() {
            return Err(Error::domain(format!(
                "{} covariate rows for {} observations",
                covariates.len(),
                observations.len()
            )));
        }
        if names.iter().any(|n| n == INTERCEPT) {
            return Err(Error::domain(format!("`{INTERCEPT}` is reserved")));
        }
        let p = names.len();
        for (j, row) in covariates.iter().enumerate() {
            if row.len() != p {
                return Err(Error::domain(format!(
                    "row {j} has {} covariates, expected {p}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::domain(format!("row {j} has non-finite covariate {v}")));
            }
        }
        let data = Self {
            names,
            covariates,
            observations,
            intercept,
        };
        let k = data.n_coefficients();
        if k == 0 {
            return Err(Error::domain("the model has no regression coefficients"));
        }
        if data.len() < k + 2 {
            return Err(Error::domain(format!(
                "{} rows are too few for {k} coefficients",
                data.len()
            )));
        }
        let design = Design::new(&data);
        let svd = design.matrix().svd(false, false);
        let s = &svd.singular_values;
        let tol = s.max() * 1e-10 * (data.len().max(k) as f64);
        if s.iter().filter(|&&v| v > tol).count() < k {
            return Err(Error::domain("design matrix is rank deficient"));
        }
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn has_intercept(&self) -> bool {
        self.intercept
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn covariates(&self) -> &[Vec<f64>] {
        &self.covariates
    }

    /// Coefficient names in order, the intercept first when present.
    pub fn coefficient_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.n_coefficients());
        if self.intercept {
            out.push(INTERCEPT.to_string());
        }
        out.extend(self.names.iter().cloned());
        out
    }

    pub fn n_coefficients(&self) -> usize {
        self.names.len() + usize::from(self.intercept)
    }

    /// Design row `j`, with the constant prepended when present.
    pub fn design_row(&self, j: usize) -> Vec<f64> {
        let mut row = Vec::with_capacity(self.n_coefficients());
        if self.intercept {
            row.push(1.0);
        }
        row.extend_from_slice(&self.covariates[j]);
        row
    }
}

/// Standardised design used by the optimiser: non-constant columns are
/// centred (when there is an intercept) and scaled to unit variance, which
/// decorrelates the coefficients and makes one simplex step size fit all.
struct Design {
    rows: Vec<Vec<f64>>,
    centre: Vec<f64>,
    scale: Vec<f64>,
    intercept: bool,
}

impl Design {
    fn new(data: &AftDataset) -> Self {
        let k = data.n_coefficients();
        let n = data.len() as f64;
        let raw: Vec<Vec<f64>> = (0..data.len()).map(|j| data.design_row(j)).collect();
        let mut centre = vec![0.0; k];
        let mut scale = vec![1.0; k];
        let first = usize::from(data.intercept);
        for c in first..k {
            let mean = raw.iter().map(|r| r[c]).sum::<f64>() / n;
            let sd = (raw.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n).sqrt();
            if data.intercept {
                centre[c] = mean;
            }
            let spread = if data.intercept {
                sd
            } else {
                (raw.iter().map(|r| r[c] * r[c]).sum::<f64>() / n).sqrt()
            };
            if spread > 0.0 {
                scale[c] = spread;
            }
        }
        let rows = raw
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(c, v)| (v - centre[c]) / scale[c])
                    .collect()
            })
            .collect();
        Self {
            rows,
            centre,
            scale,
            intercept: data.intercept,
        }
    }

    fn matrix(&self) -> DMatrix<f64> {
        let k = self.centre.len();
        DMatrix::from_fn(self.rows.len(), k, |i, c| self.rows[i][c])
    }

    /// Standardised coefficients to natural ones.
    fn natural(&self, eta: &[f64]) -> Vec<f64> {
        let mut beta: Vec<f64> = eta.iter().zip(&self.scale).map(|(e, s)| e / s).collect();
        if self.intercept {
            let shift: f64 = beta[1..]
                .iter()
                .zip(&self.centre[1..])
                .map(|(b, c)| b * c)
                .sum();
            beta[0] -= shift;
        }
        beta
    }

    fn predictor(&self, j: usize, eta: &[f64]) -> f64 {
        self.rows[j].iter().zip(eta).map(|(x, e)| x * e).sum()
    }
}

/// Regression coefficients and the error law, whose location is fixed at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AftParams {
    beta: Vec<f64>,
    error: TwoPieceParams,
}

impl AftParams {
    pub fn new(beta: Vec<f64>, error: TwoPieceParams) -> Result<Self> {
        if error.mu() != 0.0 {
            return Err(Error::domain("the error law must be located at 0"));
        }
        if beta.is_empty() || beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::domain("coefficients must be finite and non-empty"));
        }
        Ok(Self { beta, error })
    }

    /// Builds the error law from its parts.
    pub fn from_parts(
        beta: Vec<f64>,
        sigma: f64,
        param: Parameterisation,
        baseline: Baseline,
    ) -> Result<Self> {
        Self::new(beta, TwoPieceParams::new(0.0, sigma, param, baseline)?)
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn error(&self) -> &TwoPieceParams {
        &self.error
    }

    pub fn error_sigma(&self) -> f64 {
        self.error.sigma()
    }

    pub fn error_gamma(&self) -> Option<f64> {
        self.error.parameterisation().gamma()
    }

    pub fn error_delta(&self) -> Option<f64> {
        self.error.baseline().delta()
    }

    pub fn baseline(&self) -> Baseline {
        self.error.baseline()
    }

    pub fn parameterisation(&self) -> Parameterisation {
        self.error.parameterisation()
    }

    /// `xᵀβ` for a full design row (constant included when the model has one).
    pub fn linear_predictor(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.beta.len() {
            return Err(Error::domain(format!(
                "covariate vector has length {}, expected {}",
                x.len(),
                self.beta.len()
            )));
        }
        Ok(x.iter().zip(&self.beta).map(|(a, b)| a * b).sum())
    }

    /// The lifetime law of a subject with design row `x`.
    pub fn subject_law(&self, x: &[f64]) -> Result<LtpParams> {
        Ok(LtpParams::from(self.error.with_mu(self.linear_predictor(x)?)?))
    }
}

/// What the centred curve represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Centring {
    Mean,
    Median,
    Quantile(f64),
}

/// The correction `M_ε`: `−E[ε]` for the mean, `−q_ε` for a quantile.
///
/// The curve `xᵀβ − M_ε` then tracks the chosen functional of `log T`.
/// A Student-t error law with at most one degree of freedom has no mean;
/// the error then suggests median centring.
pub fn centring_constant(p: &AftParams, target: Centring) -> Result<f64> {
    match target {
        Centring::Mean => p.error.mean().map(|m| -m).map_err(|e| match e {
            Error::Divergent(msg) => {
                Error::Divergent(format!("{msg}; centre on the median instead"))
            }
            other => other,
        }),
        Centring::Median => Ok(-p.error.quantile(0.5)?),
        Centring::Quantile(q) => Ok(-p.error.quantile(q)?),
    }
}

/// Centred location `xᵀβ̂ − M_ε` on the log-time scale for design row `x`.
pub fn aft_location(p: &AftParams, x: &[f64], target: Centring) -> Result<f64> {
    Ok(p.linear_predictor(x)? - centring_constant(p, target)?)
}

/// Censored log-likelihood on the time scale.
pub fn aft_log_likelihood(p: &AftParams, data: &AftDataset) -> Result<f64> {
    Ok(aft_log_likelihood_log_time(p, data)? - exact_log_time_sum(data.observations()))
}

/// Censored log-likelihood of the log times.
pub fn aft_log_likelihood_log_time(p: &AftParams, data: &AftDataset) -> Result<f64> {
    if p.beta.len() != data.n_coefficients() {
        return Err(Error::domain(format!(
            "{} coefficients for a design with {} columns",
            p.beta.len(),
            data.n_coefficients()
        )));
    }
    let mut total = 0.0;
    for (j, obs) in data.observations.iter().enumerate() {
        let shift = p.linear_predictor(&data.design_row(j))?;
        total += obs.ln_contribution(&p.error, shift);
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct AftFit {
    pub config: FitConfig,
    pub names: Vec<String>,
    pub params: AftParams,
    pub loglik: f64,
    pub aic: f64,
    pub loglik_log_time: f64,
    pub aic_log_time: f64,
    pub n_params: usize,
    pub n_obs: usize,
    pub converged: bool,
    pub iterations: usize,
    pub effectively_normal: bool,
    /// `−E[ε]`, or `None` when the error law has no mean.
    pub centring_mean: Option<f64>,
    pub centring_median: f64,
    pub warnings: Vec<String>,
    pub profile_cis: Vec<ProfileInterval>,
    internal: Vec<f64>,
}

impl AftFit {
    /// Natural-scale estimates: coefficients by name, then error parameters.
    pub fn estimates(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self
            .names
            .iter()
            .cloned()
            .zip(self.params.beta.iter().copied())
            .collect();
        for (n, v) in self.config.layout().natural_values(&self.params.error) {
            out.push((n.to_string(), v));
        }
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

    pub fn parameter_names(&self) -> Vec<String> {
        self.estimates().into_iter().map(|(n, _)| n).collect()
    }
}

struct Objective<'a> {
    design: Design,
    layout: ShapeLayout,
    data: &'a AftDataset,
}

impl Objective<'_> {
    fn k(&self) -> usize {
        self.design.scale.len()
    }

    /// Negative log-time likelihood at standardised coefficients + shape.
    fn value(&self, x: &[f64]) -> f64 {
        let (eta, theta) = x.split_at(self.k());
        let Ok(tp) = self.layout.build(0.0, theta) else {
            return f64::INFINITY;
        };
        let mut total = 0.0;
        for (j, obs) in self.data.observations.iter().enumerate() {
            total += obs.ln_contribution(&tp, self.design.predictor(j, eta));
        }
        -total
    }

    /// Same objective with the intercept on its natural scale, which makes
    /// it a single coordinate for profiling.
    fn value_natural_intercept(&self, z: &[f64]) -> f64 {
        self.value(&self.profile_to_internal(z))
    }

    fn to_profile_coords(&self, x: &[f64]) -> Vec<f64> {
        let mut z = x.to_vec();
        if self.design.intercept {
            z[0] = self.design.natural(&x[..self.k()])[0];
        }
        z
    }

    fn profile_to_internal(&self, z: &[f64]) -> Vec<f64> {
        let mut x = z.to_vec();
        if self.design.intercept {
            let shift: f64 = z[1..self.k()]
                .iter()
                .zip(self.design.centre[1..].iter().zip(&self.design.scale[1..]))
                .map(|(e, (c, s))| e / s * c)
                .sum();
            x[0] = z[0] + shift;
        }
        x
    }
}

/// Maximum-likelihood AFT fit; least squares on the log times seeds β.
pub fn aft_fit(data: &AftDataset, config: &FitConfig) -> Result<AftFit> {
    config.validate()?;
    let obs = data.observations();
    if !obs.iter().any(Observation::is_exact) {
        return Err(Error::domain("at least one uncensored observation is required"));
    }
    let layout = config.layout();
    let k = data.n_coefficients();
    let n_params = k + layout.len();
    let mut warnings = Vec::new();
    if data.len() < 30 {
        warnings.push(format!(
            "only {} observations; estimates may be unreliable",
            data.len()
        ));
    }
    let objective = Objective {
        design: Design::new(data),
        layout,
        data,
    };

    let y = DVector::from_iterator(obs.len(), obs.iter().map(Observation::representative_log_time));
    let eta0: Vec<f64> = objective
        .design
        .matrix()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::domain(format!("least squares failed: {e}")))?
        .iter()
        .copied()
        .collect();
    let mut resid: Vec<f64> = (0..obs.len())
        .map(|j| (y[j] - objective.design.predictor(j, &eta0)).abs())
        .collect();
    let mut sigma0 = 1.4826 * median(&mut resid);
    if !(sigma0 > 1e-8) {
        sigma0 = 1.0;
    }

    let mut x0 = eta0;
    x0.extend(layout.start(sigma0, config.delta));
    let mut steps = vec![0.5 * sigma0; k];
    steps.extend(layout.steps());
    let best = engine::multistart(|x: &[f64]| objective.value(x), &x0, &steps, config.search());
    if !best.value.is_finite() {
        return Err(Error::domain("likelihood is zero at every evaluated point"));
    }
    let beta = objective.design.natural(&best.x[..k]);
    let params = AftParams::new(beta, layout.build(0.0, &best.x[k..])?)?;
    let loglik_log_time = -best.value;
    let loglik = loglik_log_time - exact_log_time_sum(obs);
    let effectively_normal = config.baseline == BaselineKind::StudentT
        && params.error_delta().is_some_and(|d| d > EFFECTIVELY_NORMAL_DF);
    if effectively_normal {
        warnings.push(format!(
            "degrees of freedom above {EFFECTIVELY_NORMAL_DF}: the fit is effectively normal"
        ));
    }
    let centring_mean = centring_constant(&params, Centring::Mean).ok();
    let centring_median = centring_constant(&params, Centring::Median)?;
    Ok(AftFit {
        config: *config,
        names: data.coefficient_names(),
        params,
        loglik,
        aic: aic(n_params, loglik),
        loglik_log_time,
        aic_log_time: aic(n_params, loglik_log_time),
        n_params,
        n_obs: data.len(),
        converged: best.converged,
        iterations: best.iterations,
        effectively_normal,
        centring_mean,
        centring_median,
        warnings,
        profile_cis: Vec::new(),
        internal: best.x,
    })
}

/// Profile-likelihood interval for a coefficient or error parameter.
pub fn aft_profile_ci(
    data: &AftDataset,
    fit: &AftFit,
    name: &str,
    level: f64,
) -> Result<ProfileInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("level must lie in (0, 1), got {level}")));
    }
    let names = fit.parameter_names();
    let index = names.iter().position(|n| n == name).ok_or_else(|| {
        Error::domain(format!(
            "unknown parameter `{name}`; expected one of {}",
            names.join(", ")
        ))
    })?;
    if data.coefficient_names() != fit.names {
        return Err(Error::domain("dataset does not match the fitted model"));
    }
    let layout = fit.config.layout();
    let objective = Objective {
        design: Design::new(data),
        layout,
        data,
    };
    let k = objective.k();
    let nm = engine::profile_options(fit.config.search());
    let mut steps = vec![0.5 * fit.params.error_sigma(); k];
    steps.extend(layout.steps());
    // the intercept's standardised step is a fine step for its natural scale too
    let f = |z: &[f64]| objective.value_natural_intercept(z);

    let small: Vec<f64> = steps.iter().map(|s| 0.05 * s).collect();
    let start = objective.to_profile_coords(&fit.internal);
    let peak = engine::polished(&f, &start, &small, nm);
    let (estimate, min_value) = if peak.value < -fit.loglik_log_time {
        (peak.x, peak.value)
    } else {
        (start, -fit.loglik_log_time)
    };

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
        let g = |y: &[f64]| f(&assemble(y));
        let y0: Vec<f64> = free.iter().map(|&i| warm[i]).collect();
        let st: Vec<f64> = free.iter().map(|&i| 0.2 * steps[i]).collect();
        let m = engine::polished(&g, &y0, &st, nm);
        (m.value, assemble(&m.x))
    };
    let (lo, hi) = engine::profile_bounds(inner, index, &estimate, min_value, -level.ln())?;
    let natural = |v: f64| {
        if index >= k {
            layout.to_natural(name, v)
        } else if index == 0 && data.has_intercept() {
            v
        } else {
            v / objective.design.scale[index]
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::{fit_mle, log_likelihood, PROFILE_LEVEL_95};
    use crate::twopiece::ParamKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(n: usize, beta: &[f64], error: &TwoPieceParams, seed: u64, censor: bool) -> AftDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut covs = Vec::with_capacity(n);
        let mut obs = Vec::with_capacity(n);
        for j in 0..n {
            let x: Vec<f64> = (1..beta.len()).map(|_| rng.gen::<f64>() * 2.0 + 40.0 * (j % 2) as f64).collect();
            let lp = beta[0] + x.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>();
            let t = (lp + error.sample(&mut rng)).exp();
            obs.push(if censor && j % 5 == 0 {
                Observation::RightCensored(t * 0.7)
            } else if censor && j % 7 == 0 {
                Observation::IntervalCensored(t * 0.8, t * 1.1)
            } else {
                Observation::Exact(t)
            });
            covs.push(x);
        }
        let names = (1..beta.len()).map(|i| format!("x{i}")).collect();
        AftDataset::new(names, covs, obs, true).unwrap()
    }

    fn normal_error(sigma: f64, gamma: f64) -> TwoPieceParams {
        TwoPieceParams::epsilon_skew(0.0, sigma, gamma, Baseline::normal()).unwrap()
    }

    #[test]
    fn rejects_bad_designs() {
        let obs: Vec<Observation> = (1..=6).map(|i| Observation::Exact(i as f64)).collect();
        let collinear = (1..=6).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        assert!(AftDataset::new(vec!["a".into(), "b".into()], collinear, obs.clone(), true).is_err());
        let constant = (1..=6).map(|_| vec![3.0]).collect();
        assert!(AftDataset::new(vec!["a".into()], constant, obs.clone(), true).is_err());
        let short = (1..=3).map(|i| vec![i as f64]).collect();
        assert!(AftDataset::new(vec!["a".into()], short, obs[..3].to_vec(), true).is_err());
        let ragged = vec![vec![1.0], vec![2.0, 1.0], vec![3.0], vec![4.0], vec![5.0], vec![6.0]];
        assert!(AftDataset::new(vec!["a".into()], ragged, obs, true).is_err());
    }

    #[test]
    fn single_row_likelihood_is_the_subject_density() {
        let error = TwoPieceParams::epsilon_skew(0.0, 0.8, 0.3, Baseline::logistic()).unwrap();
        let p = AftParams::new(vec![0.5, -0.2], error).unwrap();
        let data = AftDataset::new(
            vec!["x".into()],
            vec![vec![1.5], vec![2.5], vec![3.0], vec![0.0]],
            vec![
                Observation::Exact(2.0),
                Observation::Exact(3.0),
                Observation::Exact(1.0),
                Observation::Exact(0.5),
            ],
            true,
        )
        .unwrap();
        let total = aft_log_likelihood(&p, &data).unwrap();
        let mut reference = 0.0;
        for j in 0..4 {
            let law = p.subject_law(&data.design_row(j)).unwrap();
            let t = match data.observations()[j] {
                Observation::Exact(t) => t,
                _ => unreachable!(),
            };
            reference += law.pdf(t).unwrap().ln();
        }
        assert!((total - reference).abs() < 1e-12);
    }

    #[test]
    fn matches_straight_loop_reference() {
        let error = TwoPieceParams::epsilon_skew(0.0, 0.4, -0.2, Baseline::student_t(5.0).unwrap()).unwrap();
        let data = synthetic(30, &[1.0, 0.05, -0.3], &error, 3, true);
        let p = AftParams::new(vec![1.1, 0.04, -0.25], error).unwrap();
        let mut reference = 0.0;
        for (j, obs) in data.observations().iter().enumerate() {
            let law = p.subject_law(&data.design_row(j)).unwrap();
            reference += log_likelihood(&law, &[*obs]).unwrap();
        }
        let ll = aft_log_likelihood(&p, &data).unwrap();
        assert!((ll - reference).abs() < 1e-12 * reference.abs().max(1.0));
    }

    #[test]
    fn intercept_only_reduces_to_location_fit() {
        let truth = LtpParams::epsilon_skew(1.0, 0.6, 0.3, Baseline::logistic()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let obs: Vec<Observation> = (0..150)
            .map(|i| {
                let t = truth.sample(&mut rng);
                if i % 4 == 0 {
                    Observation::RightCensored(t)
                } else {
                    Observation::Exact(t)
                }
            })
            .collect();
        let data = AftDataset::new(Vec::new(), vec![Vec::new(); obs.len()], obs.clone(), true).unwrap();
        let cfg = FitConfig::new(BaselineKind::Logistic);
        let a = aft_fit(&data, &cfg).unwrap();
        let b = fit_mle(&obs, &cfg).unwrap();
        assert!((a.loglik - b.loglik).abs() < 1e-6);
        assert!((a.params.beta()[0] - b.params.mu()).abs() < 1e-4);
        assert_eq!(a.aic, 2.0 * a.n_params as f64 - 2.0 * a.loglik);
    }

    #[test]
    fn recovers_noise_free_coefficients() {
        let beta = [0.5, 0.2, -0.1];
        let data = synthetic(200, &beta, &normal_error(1e-3, 0.0), 5, false);
        let fit = aft_fit(&data, &FitConfig::new(BaselineKind::Normal)).unwrap();
        for (b, want) in fit.params.beta().iter().zip(beta) {
            assert!((b - want).abs() < 1e-3, "{b} vs {want}");
        }
    }

    #[test]
    fn time_rescaling_moves_only_the_intercept() {
        let error = normal_error(0.3, 0.4);
        let data = synthetic(200, &[1.0, 0.3, -0.2], &error, 8, true);
        let c = 3.5f64;
        let scaled_obs: Vec<Observation> = data
            .observations()
            .iter()
            .map(|o| match *o {
                Observation::Exact(t) => Observation::Exact(c * t),
                Observation::LeftCensored(t) => Observation::LeftCensored(c * t),
                Observation::RightCensored(t) => Observation::RightCensored(c * t),
                Observation::IntervalCensored(l, r) => Observation::IntervalCensored(c * l, c * r),
            })
            .collect();
        let scaled = AftDataset::new(data.names.clone(), data.covariates.clone(), scaled_obs, true).unwrap();
        let cfg = FitConfig::new(BaselineKind::Normal);
        let a = aft_fit(&data, &cfg).unwrap();
        let b = aft_fit(&scaled, &cfg).unwrap();
        let (ea, eb) = (a.estimates(), b.estimates());
        assert!((eb[0].1 - ea[0].1 - c.ln()).abs() < 1e-4);
        for (x, y) in ea[1..].iter().zip(&eb[1..]) {
            assert!((x.1 - y.1).abs() < 1e-4, "{} {} {}", x.0, x.1, y.1);
        }
    }

    #[test]
    fn covariate_translation_moves_only_the_intercept() {
        let error = normal_error(0.3, -0.3);
        let data = synthetic(200, &[1.0, 0.3, -0.2], &error, 9, false);
        let shifted: Vec<Vec<f64>> = data.covariates.iter().map(|r| vec![r[0] + 10.0, r[1]]).collect();
        let moved = AftDataset::new(data.names.clone(), shifted, data.observations.clone(), true).unwrap();
        let cfg = FitConfig::new(BaselineKind::Normal);
        let a = aft_fit(&data, &cfg).unwrap();
        let b = aft_fit(&moved, &cfg).unwrap();
        let (ea, eb) = (a.estimates(), b.estimates());
        assert!((eb[0].1 - (ea[0].1 - 10.0 * ea[1].1)).abs() < 1e-3);
        for (x, y) in ea[1..].iter().zip(&eb[1..]) {
            assert!((x.1 - y.1).abs() < 1e-4, "{} {} {}", x.0, x.1, y.1);
        }
    }

    #[test]
    fn symmetric_centring_is_zero() {
        let p = AftParams::new(vec![1.0, 2.0], normal_error(0.7, 0.0)).unwrap();
        assert_eq!(centring_constant(&p, Centring::Median).unwrap(), 0.0);
        assert!(centring_constant(&p, Centring::Mean).unwrap().abs() < 1e-15);
        assert_eq!(aft_location(&p, &[1.0, 0.5], Centring::Median).unwrap(), 2.0);
        let cauchy = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.2, Baseline::student_t(1.0).unwrap()).unwrap();
        let p = AftParams::new(vec![0.0], cauchy).unwrap();
        assert!(matches!(centring_constant(&p, Centring::Mean), Err(Error::Divergent(_))));
    }

    #[test]
    fn mean_centring_matches_monte_carlo() {
        let p = AftParams::new(vec![0.0], normal_error(0.25, 0.5)).unwrap();
        let m = centring_constant(&p, Centring::Mean).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| p.error().sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let sd = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!((-m - mean).abs() < 3.0 * sd / (n as f64).sqrt());
        // closed form: E[ε] = 2σ(a − b)/√(2π)
        let exact = 2.0 * 0.25 * (0.5 - 1.5) / (2.0 * std::f64::consts::PI).sqrt();
        assert!((-m - exact).abs() < 1e-14);
    }

    #[test]
    fn zero_coefficient_column_does_not_move_location() {
        let p = AftParams::new(vec![0.4, 1.2], normal_error(0.5, 0.3)).unwrap();
        let q = AftParams::new(vec![0.4, 1.2, 0.0], normal_error(0.5, 0.3)).unwrap();
        for c in [Centring::Mean, Centring::Median, Centring::Quantile(0.9)] {
            let a = aft_location(&p, &[1.0, 2.0], c).unwrap();
            let b = aft_location(&q, &[1.0, 2.0, 7.0], c).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn profile_interval_brackets_the_slope() {
        let error = normal_error(0.5, 0.0);
        let data = synthetic(300, &[1.0, 0.3, -0.2], &error, 13, true);
        let fit = aft_fit(&data, &FitConfig::symmetric(BaselineKind::Normal)).unwrap();
        for name in ["x1", INTERCEPT, "sigma"] {
            let ci = aft_profile_ci(&data, &fit, name, PROFILE_LEVEL_95).unwrap();
            let est = fit.estimate(name).unwrap();
            assert!((ci.estimate - est).abs() < 1e-4 * est.abs().max(1.0), "{name}");
            assert!(ci.lower < est && est < ci.upper, "{ci}");
            assert!(!ci.lower_open && !ci.upper_open);
        }
        assert!(aft_profile_ci(&data, &fit, "gamma", 0.147).is_err());
    }

    #[test]
    fn inverse_scale_errors_fit() {
        let error = TwoPieceParams::inverse_scale(0.0, 0.4, 1.5, Baseline::normal()).unwrap();
        let data = synthetic(400, &[0.5, 0.1], &error, 14, false);
        let cfg = FitConfig::new(BaselineKind::Normal).with_param(ParamKind::InverseScale);
        let fit = aft_fit(&data, &cfg).unwrap();
        assert!((fit.estimate("gamma").unwrap() - 1.5).abs() < 0.3);
        assert!(fit.converged);
    }
}
