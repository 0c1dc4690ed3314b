//! Weibull benchmark fit for censored lifetimes.

use crate::engine::{self, SearchOptions};
use crate::error::{Error, Result};
use crate::inference::{aic, check_dataset, robust_start, Observation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weibull {
    pub shape: f64,
    pub scale: f64,
}

impl Weibull {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!(
                "Weibull needs positive shape and scale, got ({shape}, {scale})"
            )));
        }
        Ok(Self { shape, scale })
    }

    /// Cumulative hazard `(t/λ)ᵏ`.
    fn cum_hazard(&self, t: f64) -> f64 {
        (self.shape * (t / self.scale).ln()).exp()
    }

    pub fn ln_pdf(&self, t: f64) -> f64 {
        let z = (t / self.scale).ln();
        self.shape.ln() - self.scale.ln() + (self.shape - 1.0) * z - self.cum_hazard(t)
    }

    pub fn ln_survival(&self, t: f64) -> f64 {
        -self.cum_hazard(t)
    }

    pub fn ln_cdf(&self, t: f64) -> f64 {
        let h = self.cum_hazard(t);
        if h > std::f64::consts::LN_2 {
            (-(-h).exp()).ln_1p()
        } else {
            (-(-h).exp_m1()).ln()
        }
    }

    pub fn ln_contribution(&self, obs: &Observation) -> f64 {
        match *obs {
            Observation::Exact(t) => self.ln_pdf(t),
            Observation::LeftCensored(t) => self.ln_cdf(t),
            Observation::RightCensored(t) => self.ln_survival(t),
            Observation::IntervalCensored(l, r) => {
                let (hl, hr) = (self.cum_hazard(l), self.cum_hazard(r));
                // S(l) − S(r) = e^{−hl}(1 − e^{−(hr−hl)})
                -hl + (-(-(hr - hl)).exp_m1()).ln()
            }
        }
    }

    pub fn log_likelihood(&self, data: &[Observation]) -> Result<f64> {
        check_dataset(data)?;
        Ok(data.iter().map(|o| self.ln_contribution(o)).sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullFit {
    pub params: Weibull,
    /// Time-scale log-likelihood.
    pub loglik: f64,
    pub aic: f64,
    pub converged: bool,
}

/// Maximum-likelihood Weibull fit; optimised over `(log scale, log shape)`.
pub fn fit_weibull(data: &[Observation], seed: u64) -> Result<WeibullFit> {
    check_dataset(data)?;
    if !data.iter().any(Observation::is_exact) {
        return Err(Error::domain("at least one uncensored observation is required"));
    }
    let (mu0, sigma0) = robust_start(data);
    let objective = |x: &[f64]| match Weibull::new(x[1].exp(), x[0].exp()) {
        Ok(w) => -data.iter().map(|o| w.ln_contribution(o)).sum::<f64>(),
        Err(_) => f64::INFINITY,
    };
    let opts = SearchOptions {
        max_iterations: 5000,
        tolerance: 1e-10,
        restarts: 3,
        seed,
    };
    // Gumbel moments: log T has scale 1/k and standard deviation π/(k√6)
    let k0 = std::f64::consts::PI / (sigma0 * 6f64.sqrt());
    let m = engine::multistart(objective, &[mu0, k0.ln()], &[0.3, 0.3], opts);
    if !m.value.is_finite() {
        return Err(Error::domain("Weibull likelihood is zero at every evaluated point"));
    }
    let params = Weibull::new(m.x[1].exp(), m.x[0].exp())?;
    let loglik = -m.value;
    Ok(WeibullFit {
        params,
        loglik,
        aic: aic(2, loglik),
        converged: m.converged,
    })
}
