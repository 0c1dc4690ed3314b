//! Remaining-life distribution of a subject known to be alive at `tᵢ`, and
//! plug-in prediction intervals built from it.

use crate::aft::AftParams;
use crate::error::{Error, Result};
use crate::ltp::LtpParams;

#[derive(Debug, Clone, PartialEq)]
pub struct RemainingLifeQuery {
    /// Full design row, constant included when the model has an intercept.
    pub covariates: Vec<f64>,
    pub alive_at: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl RemainingLifeQuery {
    /// Equal-tailed query with `α₁ = α₂ = 0.05`.
    pub fn new(covariates: Vec<f64>, alive_at: f64) -> Self {
        Self {
            covariates,
            alive_at,
            alpha1: 0.05,
            alpha2: 0.05,
        }
    }

    pub fn with_alphas(mut self, alpha1: f64, alpha2: f64) -> Self {
        self.alpha1 = alpha1;
        self.alpha2 = alpha2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alive_at > 0.0 && self.alive_at.is_finite()) {
            return Err(Error::domain(format!(
                "alive_at must be positive, got {}",
                self.alive_at
            )));
        }
        if !(self.alpha1 > 0.0 && self.alpha2 > 0.0 && self.alpha1 + self.alpha2 < 1.0) {
            return Err(Error::domain(format!(
                "tail probabilities must be positive with sum below 1, got ({}, {})",
                self.alpha1, self.alpha2
            )));
        }
        Ok(())
    }
}

/// Subject law and `log S(tᵢ)`, after checking the query.
fn conditioning(p: &AftParams, query: &RemainingLifeQuery) -> Result<(LtpParams, f64)> {
    query.validate()?;
    let law = p.subject_law(&query.covariates)?;
    let ln_s = law.ln_survival(query.alive_at)?;
    if ln_s == f64::NEG_INFINITY || ln_s.exp() == 0.0 {
        return Err(Error::Overflow(format!(
            "survival at {} is numerically zero; the remaining-life law is degenerate",
            query.alive_at
        )));
    }
    Ok((law, ln_s))
}

fn ln_ratio(p: &AftParams, query: &RemainingLifeQuery, t: f64) -> Result<f64> {
    let (law, ln_s) = conditioning(p, query)?;
    if !(t >= query.alive_at) {
        return Err(Error::domain(format!(
            "t = {t} lies before the conditioning time {}",
            query.alive_at
        )));
    }
    Ok(law.ln_survival(t)? - ln_s)
}

/// `P(T ≤ t | T > tᵢ)`.
pub fn remaining_life_cdf(p: &AftParams, query: &RemainingLifeQuery, t: f64) -> Result<f64> {
    let r = ln_ratio(p, query, t)?;
    Ok(-r.exp_m1())
}

/// `P(T > t | T > tᵢ) = S(t)/S(tᵢ)`.
pub fn remaining_life_survival(p: &AftParams, query: &RemainingLifeQuery, t: f64) -> Result<f64> {
    Ok(ln_ratio(p, query, t)?.exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionInterval {
    pub lower: f64,
    /// `+∞` when open.
    pub upper: f64,
    /// The upper tail probability underflowed, so no finite endpoint exists
    /// in double precision.
    pub upper_open: bool,
}

/// `[T_L, T_R]` with `G(T_L | tᵢ) = α₁` and `G(T_R | tᵢ) = 1 − α₂`, obtained
/// directly from the upper quantile function at `S(tᵢ)(1 − α₁)` and `S(tᵢ)α₂`.
pub fn prediction_interval(p: &AftParams, query: &RemainingLifeQuery) -> Result<PredictionInterval> {
    let (law, ln_s) = conditioning(p, query)?;
    let s = ln_s.exp();
    let lower = law
        .quantile_upper(s * (1.0 - query.alpha1))?
        .max(query.alive_at);
    let tail = s * query.alpha2;
    let (upper, upper_open) = if tail > 0.0 {
        (law.quantile_upper(tail)?, false)
    } else {
        (f64::INFINITY, true)
    };
    Ok(PredictionInterval {
        lower,
        upper,
        upper_open,
    })
}

/// Conditional survival on a grid of times, starting with `(tᵢ, 1)`.
pub fn survival_curve(
    p: &AftParams,
    query: &RemainingLifeQuery,
    horizon: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    if points < 2 || !(horizon > query.alive_at) {
        return Err(Error::domain("a curve needs two points and a horizon past alive_at"));
    }
    let step = (horizon - query.alive_at) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = if i + 1 == points {
                horizon
            } else {
                query.alive_at + step * i as f64
            };
            Ok((t, remaining_life_survival(p, query, t)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::Baseline;
    use crate::twopiece::TwoPieceParams;
    use proptest::prelude::*;

    fn model(gamma: f64) -> AftParams {
        let error = TwoPieceParams::epsilon_skew(0.0, 0.7, gamma, Baseline::logistic()).unwrap();
        AftParams::new(vec![5.0, 0.02], error).unwrap()
    }

    #[test]
    fn boundary_values() {
        let p = model(0.4);
        let q = RemainingLifeQuery::new(vec![1.0, 60.0], 200.0);
        assert_eq!(remaining_life_cdf(&p, &q, 200.0).unwrap(), 0.0);
        assert_eq!(remaining_life_survival(&p, &q, 200.0).unwrap(), 1.0);
        assert!(remaining_life_cdf(&p, &q, 150.0).is_err());
        let law = p.subject_law(&q.covariates).unwrap();
        let far = law.quantile_upper(1e-9 * law.survival(200.0).unwrap()).unwrap();
        assert!((remaining_life_cdf(&p, &q, far).unwrap() - (1.0 - 1e-9)).abs() < 1e-9);
    }

    #[test]
    fn matches_unconditional_law_near_zero() {
        let p = model(-0.2);
        let q = RemainingLifeQuery::new(vec![1.0, 60.0], 1e-300);
        let law = p.subject_law(&q.covariates).unwrap();
        for t in [10.0, 300.0, 5000.0] {
            let g = remaining_life_cdf(&p, &q, t).unwrap();
            assert!((g - law.cdf(t).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_compositional_formula() {
        let p = model(0.4);
        let q = RemainingLifeQuery::new(vec![1.0, 70.0], 150.0);
        let law = p.subject_law(&q.covariates).unwrap();
        let gi = law.cdf(150.0).unwrap();
        for t in [150.0, 200.0, 400.0, 900.0] {
            let brute = (law.cdf(t).unwrap() - gi) / (1.0 - gi);
            assert!((remaining_life_cdf(&p, &q, t).unwrap() - brute).abs() < 1e-14);
            let ratio = law.survival(t).unwrap() / law.survival(150.0).unwrap();
            assert!((remaining_life_survival(&p, &q, t).unwrap() - ratio).abs() < 1e-14);
        }
    }

    #[test]
    fn interval_solves_its_equations() {
        let p = model(0.4);
        let q = RemainingLifeQuery::new(vec![1.0, 55.0], 300.0);
        let pi = prediction_interval(&p, &q).unwrap();
        assert!(q.alive_at <= pi.lower && pi.lower < pi.upper && !pi.upper_open);
        assert!((remaining_life_cdf(&p, &q, pi.lower).unwrap() - 0.05).abs() < 1e-9);
        assert!((remaining_life_cdf(&p, &q, pi.upper).unwrap() - 0.95).abs() < 1e-9);
    }

    #[test]
    fn intervals_nest() {
        let p = model(0.1);
        let q = RemainingLifeQuery::new(vec![1.0, 55.0], 100.0);
        let wide = prediction_interval(&p, &q.clone().with_alphas(0.05, 0.05)).unwrap();
        let narrow = prediction_interval(&p, &q.with_alphas(0.1, 0.1)).unwrap();
        assert!(wide.lower < narrow.lower && narrow.upper < wide.upper);
    }

    #[test]
    fn degenerate_and_invalid_queries() {
        let p = model(0.0);
        let q = RemainingLifeQuery::new(vec![1.0, 55.0], 1e300);
        assert!(matches!(remaining_life_cdf(&p, &q, 1e301), Err(Error::Overflow(_))));
        let bad = RemainingLifeQuery::new(vec![1.0, 55.0], 10.0).with_alphas(0.6, 0.5);
        assert!(prediction_interval(&p, &bad).is_err());
        let short = RemainingLifeQuery::new(vec![1.0], 10.0);
        assert!(prediction_interval(&p, &short).is_err());
    }

    #[test]
    fn curve_starts_at_one_and_decreases() {
        let p = model(0.3);
        let q = RemainingLifeQuery::new(vec![1.0, 60.0], 120.0);
        let curve = survival_curve(&p, &q, 2000.0, 50).unwrap();
        assert_eq!(curve[0], (120.0, 1.0));
        assert_eq!(curve.last().unwrap().0, 2000.0);
        assert!(curve.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    proptest! {
        #[test]
        fn cdf_and_survival_are_complementary(
            gamma in -0.9f64..0.9,
            alive in 1.0f64..2000.0,
            extra in 0.0f64..5000.0,
        ) {
            let p = model(gamma);
            let q = RemainingLifeQuery::new(vec![1.0, 60.0], alive);
            let t = alive + extra;
            let c = remaining_life_cdf(&p, &q, t).unwrap();
            let s = remaining_life_survival(&p, &q, t).unwrap();
            prop_assert!((c + s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn endpoints_round_trip(gamma in -0.9f64..0.9, alive in 1.0f64..2000.0, a1 in 0.01f64..0.3, a2 in 0.01f64..0.3) {
            let p = model(gamma);
            let q = RemainingLifeQuery::new(vec![1.0, 60.0], alive).with_alphas(a1, a2);
            let pi = prediction_interval(&p, &q).unwrap();
            prop_assert!((remaining_life_cdf(&p, &q, pi.lower).unwrap() - a1).abs() < 1e-9);
            prop_assert!((remaining_life_cdf(&p, &q, pi.upper).unwrap() - (1.0 - a2)).abs() < 1e-9);
        }
    }
}
