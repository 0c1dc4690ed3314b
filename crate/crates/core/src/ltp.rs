//! Log two-piece distributions on `(0, ∞)`: the law of `exp(X)` for a
//! two-piece `X`. Every quantity is computed on the log scale through
//! [`TwoPieceParams`].

use rand::Rng;

use crate::baselines::{Baseline, BaselineKind};
use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};
use crate::twopiece::{Parameterisation, TwoPieceParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtpParams {
    tp: TwoPieceParams,
}

impl LtpParams {
    pub fn new(mu: f64, sigma: f64, param: Parameterisation, baseline: Baseline) -> Result<Self> {
        TwoPieceParams::new(mu, sigma, param, baseline).map(Self::from)
    }

    pub fn epsilon_skew(mu: f64, sigma: f64, gamma: f64, baseline: Baseline) -> Result<Self> {
        TwoPieceParams::epsilon_skew(mu, sigma, gamma, baseline).map(Self::from)
    }

    pub fn inverse_scale(mu: f64, sigma: f64, gamma: f64, baseline: Baseline) -> Result<Self> {
        TwoPieceParams::inverse_scale(mu, sigma, gamma, baseline).map(Self::from)
    }

    /// The distribution of `log Y`.
    pub fn log_law(&self) -> &TwoPieceParams {
        &self.tp
    }

    pub fn mu(&self) -> f64 {
        self.tp.mu()
    }

    pub fn sigma(&self) -> f64 {
        self.tp.sigma()
    }

    pub fn parameterisation(&self) -> Parameterisation {
        self.tp.parameterisation()
    }

    pub fn baseline(&self) -> Baseline {
        self.tp.baseline()
    }

    /// The junction point `e^μ`.
    pub fn junction(&self) -> f64 {
        self.tp.mu().exp()
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        self.ln_pdf(y).map(f64::exp)
    }

    pub fn ln_pdf(&self, y: f64) -> Result<f64> {
        check_positive(y)?;
        if y == f64::INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let x = y.ln();
        Ok(self.tp.ln_pdf(x) - x)
    }

    pub fn cdf(&self, y: f64) -> Result<f64> {
        check_positive(y)?;
        Ok(self.tp.cdf(y.ln()))
    }

    /// `1 − F(y)`, accurate far into the right tail.
    pub fn survival(&self, y: f64) -> Result<f64> {
        check_positive(y)?;
        Ok(self.tp.sf(y.ln()))
    }

    pub fn ln_cdf(&self, y: f64) -> Result<f64> {
        check_positive(y)?;
        Ok(self.tp.ln_cdf(y.ln()))
    }

    pub fn ln_survival(&self, y: f64) -> Result<f64> {
        check_positive(y)?;
        Ok(self.tp.ln_sf(y.ln()))
    }

    /// `f(y) / (1 − F(y))`; fails with [`Error::Overflow`] once the survival
    /// function underflows.
    pub fn hazard(&self, y: f64) -> Result<f64> {
        let ln_s = self.ln_survival(y)?;
        if self.survival(y)? == 0.0 {
            return Err(Error::Overflow(format!(
                "survival underflows at y = {y}; hazard is not representable"
            )));
        }
        let h = (self.ln_pdf(y)? - ln_s).exp();
        if h.is_finite() {
            Ok(h)
        } else {
            Err(Error::Overflow(format!("hazard overflows at y = {y}")))
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.tp.quantile(p).map(f64::exp)
    }

    /// The point with survival probability `q`.
    pub fn quantile_upper(&self, q: f64) -> Result<f64> {
        self.tp.quantile_upper(q).map(f64::exp)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.tp.sample(rng).exp()
    }

    /// `R = b/a`, the ratio of the mass below `e^μ` to the mass above it.
    pub fn mass_ratio(&self) -> f64 {
        let (a, b) = self.tp.factors();
        b / a
    }

    /// `E[Y^order]`, or [`Error::Divergent`] when it does not exist.
    ///
    /// Existence is decided from the right tail of the baseline; the value
    /// is `∫ e^{kx} f(x) dx` on the log scale by adaptive quadrature.
    pub fn moment(&self, order: u32) -> Result<f64> {
        if order == 0 {
            return Err(Error::domain("moment order must be at least 1"));
        }
        let k = f64::from(order);
        let mu = self.tp.mu();
        let divergent = || {
            Error::Divergent(format!(
                "moment of order {order} does not exist for {}",
                self.tp.baseline()
            ))
        };
        if !self.has_exponential_moment(k) {
            return Err(divergent());
        }
        let integrand = |x: f64| (k * x + self.tp.ln_pdf(x)).exp();
        let opts = QuadOptions {
            abs_tol: 0.0,
            ..QuadOptions::default()
        };
        // split at the mode, where the density has a kink
        let value = quad::integrate_real_line(integrand, mu, opts).value;
        if !value.is_finite() {
            return Err(divergent());
        }
        Ok(value)
    }

    /// Whether `∫ e^{kx} f(x) dx` is finite, judged from the right tail of
    /// the baseline: `s(z)` must decay faster than `e^{-k σ a z}`.
    fn has_exponential_moment(&self, k: f64) -> bool {
        let base = self.tp.baseline();
        let (a, _) = self.tp.factors();
        let rate = k * self.tp.sigma() * a;
        let delta = base.delta().unwrap_or(f64::NAN);
        match base.kind() {
            BaselineKind::Normal => true,
            BaselineKind::StudentT => false,
            BaselineKind::Logistic | BaselineKind::Laplace => rate < 1.0,
            BaselineKind::ExponentialPower => delta > 1.0 || (delta == 1.0 && rate < 1.0),
            // s(z) ~ exp(−½ sinh²(δ asinh z)) ~ exp(−c z^{2δ})
            BaselineKind::SinhArcsinh => delta > 0.5 || (delta == 0.5 && rate < 0.25),
        }
    }
}

impl From<TwoPieceParams> for LtpParams {
    fn from(tp: TwoPieceParams) -> Self {
        Self { tp }
    }
}

fn check_positive(y: f64) -> Result<()> {
    if y > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("argument must be positive, got {y}")))
    }
}

/// One log-symmetric piece `s((ln y − μ)/σ) / (σ y)` of a composite model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComponent {
    pub mu: f64,
    pub scale: f64,
}

impl LogComponent {
    /// Density in `y`, given `ln y`.
    fn pdf(&self, base: &Baseline, ln_y: f64) -> f64 {
        base.density((ln_y - self.mu) / self.scale) / (self.scale * ln_y.exp())
    }

    fn cdf(&self, base: &Baseline, ln_y: f64) -> f64 {
        base.cdf_at((ln_y - self.mu) / self.scale)
    }
}

/// Two truncated densities glued at a threshold `θ`:
///
/// ```text
/// f(y) = ω s₁(y) / S₁(θ)            for y < θ
///        (1 − ω) s₂(y) / (1 − S₂(θ)) for y ≥ θ
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeForm {
    omega: f64,
    // kept on the log scale so that a junction at e^μ meets the pieces at
    // exactly zero; non-smooth baselines are sensitive to the last ulp there
    ln_theta: f64,
    left: LogComponent,
    right: LogComponent,
    baseline: Baseline,
}

impl CompositeForm {
    pub fn new(
        omega: f64,
        theta: f64,
        left: LogComponent,
        right: LogComponent,
        baseline: Baseline,
    ) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!("theta must be positive, got {theta}")));
        }
        Self::with_ln_theta(omega, theta.ln(), left, right, baseline)
    }

    fn with_ln_theta(
        omega: f64,
        ln_theta: f64,
        left: LogComponent,
        right: LogComponent,
        baseline: Baseline,
    ) -> Result<Self> {
        if !(omega > 0.0 && omega < 1.0) {
            return Err(Error::domain(format!("omega must lie in (0, 1), got {omega}")));
        }
        for c in [left, right] {
            if !(c.scale > 0.0 && c.scale.is_finite() && c.mu.is_finite()) {
                return Err(Error::domain(format!("invalid component {c:?}")));
            }
        }
        Ok(Self {
            omega,
            ln_theta,
            left,
            right,
            baseline,
        })
    }

    /// Builds the continuous composite: `ω = s₂(θ)S₁(θ) / (s₂(θ)S₁(θ) + s₁(θ)(1 − S₂(θ)))`.
    pub fn continuous(
        theta: f64,
        left: LogComponent,
        right: LogComponent,
        baseline: Baseline,
    ) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!("theta must be positive, got {theta}")));
        }
        Self::continuous_at(theta.ln(), left, right, baseline)
    }

    fn continuous_at(
        ln_theta: f64,
        left: LogComponent,
        right: LogComponent,
        baseline: Baseline,
    ) -> Result<Self> {
        let s1 = left.pdf(&baseline, ln_theta);
        let s2 = right.pdf(&baseline, ln_theta);
        let big_s1 = left.cdf(&baseline, ln_theta);
        let big_s2 = right.cdf(&baseline, ln_theta);
        let omega = s2 * big_s1 / (s2 * big_s1 + s1 * (1.0 - big_s2));
        Self::with_ln_theta(omega, ln_theta, left, right, baseline)
    }

    /// The composite representation of an LTP law: both pieces centred at
    /// `μ` with the two branch scales, and `θ = e^μ`.
    pub fn from_ltp(p: &LtpParams) -> Result<Self> {
        let (sigma1, sigma2) = p.log_law().scales();
        let mu = p.mu();
        Self::continuous_at(
            mu,
            LogComponent { mu, scale: sigma1 },
            LogComponent { mu, scale: sigma2 },
            p.baseline(),
        )
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.ln_theta.exp()
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        check_positive(y)?;
        if !y.is_finite() {
            return Ok(0.0);
        }
        let base = &self.baseline;
        let ln_y = y.ln();
        Ok(if ln_y < self.ln_theta {
            self.omega * self.left.pdf(base, ln_y) / self.left.cdf(base, self.ln_theta)
        } else {
            (1.0 - self.omega) * self.right.pdf(base, ln_y)
                / (1.0 - self.right.cdf(base, self.ln_theta))
        })
    }
}
