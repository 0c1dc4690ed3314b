//! Two-piece distributions on the real line.
//!
//! A symmetric baseline `s` is glued at its mode `μ` to two differently
//! scaled halves:
//!
//! ```text
//! f(x) = 2 / (σ (a + b)) · s((x − μ) / (σ b))   for x < μ
//!        2 / (σ (a + b)) · s((x − μ) / (σ a))   for x ≥ μ
//! ```
//!
//! The point `x = μ` belongs to the right-hand branch.

use std::fmt;
use std::str::FromStr;

use rand::distributions::Open01;
use rand::Rng;

use crate::baselines::Baseline;
use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// How the pair of scale factors `(a, b)` is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Parameterisation {
    /// `a = 1 − γ`, `b = 1 + γ`, `γ ∈ (−1, 1)`.
    EpsilonSkew { gamma: f64 },
    /// `a = γ`, `b = 1/γ`, `γ > 0`.
    InverseScale { gamma: f64 },
    /// Left scale `σ₁` and right scale `σ₂`, multiplied by `σ`.
    RawScales { sigma1: f64, sigma2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamKind {
    EpsilonSkew,
    InverseScale,
    RawScales,
}

impl ParamKind {
    pub fn token(self) -> &'static str {
        match self {
            ParamKind::EpsilonSkew => "eps",
            ParamKind::InverseScale => "inv",
            ParamKind::RawScales => "raw",
        }
    }

    /// The symmetric member of the family (`a = b = 1`).
    pub fn symmetric(self) -> Parameterisation {
        match self {
            ParamKind::EpsilonSkew => Parameterisation::EpsilonSkew { gamma: 0.0 },
            ParamKind::InverseScale => Parameterisation::InverseScale { gamma: 1.0 },
            ParamKind::RawScales => Parameterisation::RawScales {
                sigma1: 1.0,
                sigma2: 1.0,
            },
        }
    }
}

impl fmt::Display for ParamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ParamKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eps" | "epsilon" | "epsilon-skew" => Ok(ParamKind::EpsilonSkew),
            "inv" | "isf" | "inverse-scale" | "inverse" => Ok(ParamKind::InverseScale),
            "raw" | "raw-scales" => Ok(ParamKind::RawScales),
            other => Err(Error::domain(format!("unknown parameterisation `{other}`"))),
        }
    }
}

impl Parameterisation {
    pub fn kind(&self) -> ParamKind {
        match self {
            Parameterisation::EpsilonSkew { .. } => ParamKind::EpsilonSkew,
            Parameterisation::InverseScale { .. } => ParamKind::InverseScale,
            Parameterisation::RawScales { .. } => ParamKind::RawScales,
        }
    }

    /// The skewness parameter, when the parameterisation has one.
    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Parameterisation::EpsilonSkew { gamma } | Parameterisation::InverseScale { gamma } => {
                Some(gamma)
            }
            Parameterisation::RawScales { .. } => None,
        }
    }

    /// Right and left scale factors `(a, b)`.
    pub fn factors(&self) -> (f64, f64) {
        match *self {
            Parameterisation::EpsilonSkew { gamma } => (1.0 - gamma, 1.0 + gamma),
            Parameterisation::InverseScale { gamma } => (gamma, 1.0 / gamma),
            Parameterisation::RawScales { sigma1, sigma2 } => (sigma2, sigma1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Parameterisation::EpsilonSkew { gamma } => {
                if !(gamma > -1.0 && gamma < 1.0) {
                    return Err(Error::domain(format!(
                        "epsilon-skew gamma must lie in (-1, 1), got {gamma}"
                    )));
                }
            }
            Parameterisation::InverseScale { gamma } => {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::domain(format!(
                        "inverse-scale gamma must be positive, got {gamma}"
                    )));
                }
            }
            Parameterisation::RawScales { sigma1, sigma2 } => {
                for s in [sigma1, sigma2] {
                    if !(s > 0.0 && s.is_finite()) {
                        return Err(Error::domain(format!("scales must be positive, got {s}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A validated two-piece distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPieceParams {
    mu: f64,
    sigma: f64,
    param: Parameterisation,
    baseline: Baseline,
    a: f64,
    b: f64,
}

impl TwoPieceParams {
    pub fn new(mu: f64, sigma: f64, param: Parameterisation, baseline: Baseline) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain(format!("mu must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        param.validate()?;
        let (a, b) = param.factors();
        Ok(Self {
            mu,
            sigma,
            param,
            baseline,
            a,
            b,
        })
    }

    pub fn epsilon_skew(mu: f64, sigma: f64, gamma: f64, baseline: Baseline) -> Result<Self> {
        Self::new(mu, sigma, Parameterisation::EpsilonSkew { gamma }, baseline)
    }

    pub fn inverse_scale(mu: f64, sigma: f64, gamma: f64, baseline: Baseline) -> Result<Self> {
        Self::new(mu, sigma, Parameterisation::InverseScale { gamma }, baseline)
    }

    /// Left scale `sigma1` below the mode and right scale `sigma2` above it.
    pub fn raw(mu: f64, sigma1: f64, sigma2: f64, baseline: Baseline) -> Result<Self> {
        Self::new(mu, 1.0, Parameterisation::RawScales { sigma1, sigma2 }, baseline)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn parameterisation(&self) -> Parameterisation {
        self.param
    }

    pub fn baseline(&self) -> Baseline {
        self.baseline
    }

    pub fn factors(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Effective scales `(σ b, σ a)` below and above the mode.
    pub fn scales(&self) -> (f64, f64) {
        (self.sigma * self.b, self.sigma * self.a)
    }

    /// Probability mass below the mode, `b / (a + b)`.
    pub fn mass_below_mode(&self) -> f64 {
        self.b / (self.a + self.b)
    }

    /// Same shape and scale, with the location moved to `mu`.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(mu, self.sigma, self.param, self.baseline)
    }

    fn standardise(&self, x: f64) -> (f64, bool) {
        let d = x - self.mu;
        if d < 0.0 {
            (d / (self.sigma * self.b), true)
        } else {
            (d / (self.sigma * self.a), false)
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let (z, _) = self.standardise(x);
        LN_2 - self.sigma.ln() - (self.a + self.b).ln() + self.baseline.ln_density(z)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (z, left) = self.standardise(x);
        let ab = self.a + self.b;
        if left {
            2.0 * self.b / ab * self.baseline.cdf_at(z)
        } else {
            1.0 - 2.0 * self.a / ab * self.baseline.sf_at(z)
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        let (z, left) = self.standardise(x);
        let ab = self.a + self.b;
        if left {
            1.0 - 2.0 * self.b / ab * self.baseline.cdf_at(z)
        } else {
            2.0 * self.a / ab * self.baseline.sf_at(z)
        }
    }

    pub fn ln_cdf(&self, x: f64) -> f64 {
        let (z, left) = self.standardise(x);
        if left {
            (2.0 * self.b / (self.a + self.b)).ln() + self.baseline.ln_cdf_at(z)
        } else {
            (-self.sf(x)).ln_1p()
        }
    }

    pub fn ln_sf(&self, x: f64) -> f64 {
        let (z, left) = self.standardise(x);
        if left {
            (-self.cdf(x)).ln_1p()
        } else {
            (2.0 * self.a / (self.a + self.b)).ln() + self.baseline.ln_sf_at(z)
        }
    }

    /// Lower-tail quantile.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self.quantile_at(p))
    }

    /// The point with upper-tail probability `q`, accurate for tiny `q`.
    pub fn quantile_upper(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok(self.quantile_upper_at(q))
    }

    pub(crate) fn quantile_at(&self, p: f64) -> f64 {
        let ab = self.a + self.b;
        if p < self.b / ab {
            let z = self.baseline.quantile_lower(p * ab / (2.0 * self.b));
            self.mu + self.sigma * self.b * z
        } else {
            self.quantile_upper_at(1.0 - p)
        }
    }

    pub(crate) fn quantile_upper_at(&self, q: f64) -> f64 {
        let ab = self.a + self.b;
        if q <= self.a / ab {
            let z = -self.baseline.quantile_lower(q * ab / (2.0 * self.a));
            self.mu + self.sigma * self.a * z
        } else {
            let z = self.baseline.quantile_lower((1.0 - q) * ab / (2.0 * self.b));
            self.mu + self.sigma * self.b * z
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile_at(u)
    }

    /// `E[X] = μ + 2σ(a − b)·∫₀^∞ z s(z) dz`.
    pub fn mean(&self) -> Result<f64> {
        let m1 = self.baseline.half_mean().ok_or_else(|| {
            Error::Divergent(format!("the mean of the {} baseline diverges", self.baseline))
        })?;
        Ok(self.mu + 2.0 * self.sigma * (self.a - self.b) * m1)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("probability must lie in (0, 1), got {p}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_lower, integrate_real_line, QuadOptions};
    use crate::special;
    use crate::testutil::{bisect, ks_distance, ks_two_sample};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn baselines() -> Vec<Baseline> {
        vec![
            Baseline::normal(),
            Baseline::logistic(),
            Baseline::laplace(),
            Baseline::student_t(2.5).unwrap(),
            Baseline::exponential_power(1.4).unwrap(),
            Baseline::sinh_arcsinh(0.8).unwrap(),
        ]
    }

    #[test]
    fn symmetric_case_reduces_to_scaled_baseline() {
        for s in baselines() {
            let tp = TwoPieceParams::epsilon_skew(1.2, 0.7, 0.0, s).unwrap();
            for &x in &[-2.0, 0.0, 1.2, 3.5] {
                let direct = s.density((x - 1.2) / 0.7) / 0.7;
                assert!((tp.pdf(x) - direct).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn skewed_normal_examples() {
        let n = Baseline::normal();
        let tp = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.5, n).unwrap();
        assert!((tp.pdf(1.0) - special::norm_pdf(2.0)).abs() < 1e-16);
        assert_eq!(tp.cdf(0.0), 0.75);
        assert_eq!(tp.quantile(0.75).unwrap(), 0.0);

        let tp = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.25, n).unwrap();
        let q = integrate_lower(|x| tp.pdf(x), 0.8, QuadOptions::default()).value;
        assert!((tp.cdf(0.8) - q).abs() < 1e-10);
    }

    #[test]
    fn laplace_quantile_matches_bisection() {
        let tp = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.4, Baseline::laplace()).unwrap();
        let x = bisect(|x| tp.cdf(x), 0.2, -50.0, 50.0);
        assert!((tp.quantile(0.2).unwrap() - x).abs() < 1e-12);
    }

    #[test]
    fn sampling() {
        let base = Baseline::logistic();
        let tp = TwoPieceParams::epsilon_skew(1.0, 0.8, 0.3, base).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut xs: Vec<f64> = (0..100_000).map(|_| tp.sample(&mut rng)).collect();
        let below = xs.iter().filter(|&&x| x < 1.0).count() as f64 / xs.len() as f64;
        assert!((below - tp.mass_below_mode()).abs() < 0.005);
        assert!(ks_distance(&mut xs, |x| tp.cdf(x)) < 0.01);

        let sym = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.0, base).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(1);
        let mut r2 = ChaCha8Rng::seed_from_u64(2);
        let mut a: Vec<f64> = (0..100_000).map(|_| sym.sample(&mut r1)).collect();
        let mut b: Vec<f64> = (0..100_000).map(|_| base.sample(&mut r2)).collect();
        assert!(ks_two_sample(&mut a, &mut b) < 0.01);
    }

    #[test]
    fn junction_mass_and_continuity() {
        let tp = TwoPieceParams::epsilon_skew(0.3, 1.5, -0.4, Baseline::logistic()).unwrap();
        let (a, b) = tp.factors();
        assert!((tp.cdf(0.3) - b / (a + b)).abs() < 1e-15);
        let left = tp.pdf(0.3 - 1e-12);
        assert!((left - tp.pdf(0.3)).abs() < 1e-10);
    }

    #[test]
    fn raw_scales_match_epsilon_skew() {
        let s = Baseline::student_t(4.0).unwrap();
        let eps = TwoPieceParams::epsilon_skew(0.0, 2.0, 0.25, s).unwrap();
        let (s1, s2) = eps.scales();
        let raw = TwoPieceParams::raw(0.0, s1, s2, s).unwrap();
        for &x in &[-3.0, -0.1, 0.0, 0.4, 5.0] {
            assert!((eps.pdf(x) - raw.pdf(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        let n = Baseline::normal();
        assert!(TwoPieceParams::epsilon_skew(0.0, 1.0, 1.0, n).is_err());
        assert!(TwoPieceParams::epsilon_skew(0.0, 0.0, 0.0, n).is_err());
        assert!(TwoPieceParams::inverse_scale(0.0, 1.0, 0.0, n).is_err());
        assert!(TwoPieceParams::raw(f64::NAN, 1.0, 1.0, n).is_err());
        let tp = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.2, n).unwrap();
        assert!(tp.quantile(1.0).is_err());
    }

    #[test]
    fn mean_matches_quadrature() {
        for s in baselines() {
            let tp = TwoPieceParams::inverse_scale(0.5, 1.1, 1.3, s).unwrap();
            let q = integrate_real_line(|x| x * tp.pdf(x), 0.5, QuadOptions::default());
            assert!((tp.mean().unwrap() - q.value).abs() < 1e-8, "{s}");
        }
        let cauchy = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.2, Baseline::student_t(1.0).unwrap())
            .unwrap();
        assert!(matches!(cauchy.mean(), Err(Error::Divergent(_))));
    }

    #[test]
    fn upper_quantile_in_far_tail() {
        let tp = TwoPieceParams::epsilon_skew(0.0, 1.0, 0.3, Baseline::normal()).unwrap();
        let x = tp.quantile_upper(1e-200).unwrap();
        let back = tp.ln_sf(x);
        assert!((back - (1e-200f64).ln()).abs() < 1e-9);
    }

    fn arb_param() -> impl Strategy<Value = Parameterisation> {
        prop_oneof![
            (-0.95f64..0.95).prop_map(|gamma| Parameterisation::EpsilonSkew { gamma }),
            (0.2f64..5.0).prop_map(|gamma| Parameterisation::InverseScale { gamma }),
            (0.2f64..4.0, 0.2f64..4.0)
                .prop_map(|(sigma1, sigma2)| Parameterisation::RawScales { sigma1, sigma2 }),
        ]
    }

    fn arb_baseline() -> impl Strategy<Value = Baseline> {
        prop_oneof![
            Just(Baseline::normal()),
            Just(Baseline::logistic()),
            Just(Baseline::laplace()),
            (0.5f64..30.0).prop_map(|d| Baseline::student_t(d).unwrap()),
            (0.5f64..4.0).prop_map(|d| Baseline::exponential_power(d).unwrap()),
            (0.3f64..3.0).prop_map(|d| Baseline::sinh_arcsinh(d).unwrap()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn density_integrates_to_one(
            mu in -3.0f64..3.0, sigma in 0.2f64..3.0,
            param in arb_param(), base in arb_baseline(),
        ) {
            let tp = TwoPieceParams::new(mu, sigma, param, base).unwrap();
            let opts = QuadOptions::default();
            let q = integrate_real_line(|x| tp.pdf(x), mu, opts);
            prop_assert!((q.value - 1.0).abs() < 1e-8, "{}", q.value);
        }

        #[test]
        fn mode_mass_and_quantile_round_trip(
            mu in -3.0f64..3.0, sigma in 0.2f64..3.0,
            param in arb_param(), base in arb_baseline(), p in 0.001f64..0.999,
        ) {
            let tp = TwoPieceParams::new(mu, sigma, param, base).unwrap();
            let (a, b) = tp.factors();
            prop_assert!((tp.cdf(mu) - b / (a + b)).abs() < 1e-14);
            let x = tp.quantile(p).unwrap();
            prop_assert!((tp.cdf(x) - p).abs() < 1e-10);
        }

        #[test]
        fn reflection_and_unimodality(
            gamma in -0.95f64..0.95, base in arb_baseline(), mu in -2.0f64..2.0, t in 0.0f64..6.0,
        ) {
            let pos = TwoPieceParams::epsilon_skew(mu, 1.3, gamma, base).unwrap();
            let neg = TwoPieceParams::epsilon_skew(mu, 1.3, -gamma, base).unwrap();
            prop_assert!((pos.pdf(mu + t) - neg.pdf(mu - t)).abs() < 1e-14);
            let step = 0.05;
            prop_assert!(pos.pdf(mu + t + step) <= pos.pdf(mu + t) + 1e-12);
            prop_assert!(pos.pdf(mu - t - step) <= pos.pdf(mu - t) + 1e-12);
        }

        #[test]
        fn cdf_is_monotone_and_matches_density(
            param in arb_param(), base in arb_baseline(), x0 in -4.0f64..4.0, dx in 0.01f64..2.0,
        ) {
            let tp = TwoPieceParams::new(0.0, 1.0, param, base).unwrap();
            prop_assert!(tp.cdf(x0 + dx) >= tp.cdf(x0));
            // split at the mode, where the density has a kink
            let opts = QuadOptions::default();
            let (lo, hi) = (x0, x0 + dx);
            let q = if lo < 0.0 && hi > 0.0 {
                integrate(|x| tp.pdf(x), lo, 0.0, opts).value
                    + integrate(|x| tp.pdf(x), 0.0, hi, opts).value
            } else {
                integrate(|x| tp.pdf(x), lo, hi, opts).value
            };
            prop_assert!((tp.cdf(x0 + dx) - tp.cdf(x0) - q).abs() < 1e-10);
        }
    }
}
