//! Symmetric unimodal baseline densities on the real line.
//!
//! Every family has its mode at zero and satisfies `S(0) = ½`. Families with
//! a tail parameter (Student-t degrees of freedom, exponential-power power,
//! sinh-arcsinh tail weight) carry it as `delta`.

use std::fmt;
use std::str::FromStr;

use rand::distributions::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};
use crate::special::{self, LN_SQRT_2PI};

/// Above this many degrees of freedom the Student-t is evaluated as its normal limit.
pub const STUDENT_T_NORMAL_LIMIT: f64 = 1e7;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    Normal,
    StudentT,
    Logistic,
    Laplace,
    ExponentialPower,
    SinhArcsinh,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 6] = [
        BaselineKind::Normal,
        BaselineKind::StudentT,
        BaselineKind::Logistic,
        BaselineKind::Laplace,
        BaselineKind::ExponentialPower,
        BaselineKind::SinhArcsinh,
    ];

    pub fn has_delta(self) -> bool {
        matches!(
            self,
            BaselineKind::StudentT | BaselineKind::ExponentialPower | BaselineKind::SinhArcsinh
        )
    }

    /// Starting value for the tail parameter when it is estimated.
    pub fn default_delta(self) -> Option<f64> {
        match self {
            BaselineKind::StudentT => Some(5.0),
            BaselineKind::ExponentialPower => Some(2.0),
            BaselineKind::SinhArcsinh => Some(1.0),
            _ => None,
        }
    }

    /// Command-line and report token.
    pub fn token(self) -> &'static str {
        match self {
            BaselineKind::Normal => "normal",
            BaselineKind::StudentT => "t",
            BaselineKind::Logistic => "logistic",
            BaselineKind::Laplace => "laplace",
            BaselineKind::ExponentialPower => "exppower",
            BaselineKind::SinhArcsinh => "sas",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            BaselineKind::Normal => "Normal",
            BaselineKind::StudentT => "t",
            BaselineKind::Logistic => "logistic",
            BaselineKind::Laplace => "Laplace",
            BaselineKind::ExponentialPower => "exponential power",
            BaselineKind::SinhArcsinh => "SAS",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "normal" | "gaussian" => Ok(BaselineKind::Normal),
            "t" | "student" | "student-t" | "studentt" => Ok(BaselineKind::StudentT),
            "logistic" => Ok(BaselineKind::Logistic),
            "laplace" => Ok(BaselineKind::Laplace),
            "exppower" | "exponential-power" | "ep" => Ok(BaselineKind::ExponentialPower),
            "sas" | "sinh-arcsinh" | "sinharcsinh" => Ok(BaselineKind::SinhArcsinh),
            other => Err(Error::domain(format!("unknown baseline family `{other}`"))),
        }
    }
}

/// A validated baseline density `s(·; δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    kind: BaselineKind,
    delta: f64,
    /// Cached log normalizing constant (Student-t and exponential power).
    ln_norm: f64,
}

impl Baseline {
    pub fn new(kind: BaselineKind, delta: Option<f64>) -> Result<Self> {
        if !kind.has_delta() {
            if let Some(d) = delta {
                return Err(Error::domain(format!(
                    "the {} baseline has no tail parameter (got delta = {d})",
                    kind.display_name()
                )));
            }
            return Ok(Self {
                kind,
                delta: f64::NAN,
                ln_norm: 0.0,
            });
        }
        let delta = delta.ok_or_else(|| {
            Error::domain(format!("the {} baseline requires delta", kind.display_name()))
        })?;
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::domain(format!("delta must be positive and finite, got {delta}")));
        }
        let ln_norm = match kind {
            BaselineKind::StudentT => special::student_t_ln_norm(delta),
            BaselineKind::ExponentialPower => {
                let shape = 1.0 / delta;
                // lnΓ(1) = lnΓ(2) = 0; keep δ = 1 bit-identical to the Laplace density.
                let lg = if shape == 1.0 || shape == 2.0 {
                    0.0
                } else {
                    special::ln_gamma(shape)
                };
                delta.ln() - LN_2 - lg
            }
            _ => 0.0,
        };
        Ok(Self {
            kind,
            delta,
            ln_norm,
        })
    }

    pub fn normal() -> Self {
        Self::new(BaselineKind::Normal, None).expect("valid")
    }

    pub fn logistic() -> Self {
        Self::new(BaselineKind::Logistic, None).expect("valid")
    }

    pub fn laplace() -> Self {
        Self::new(BaselineKind::Laplace, None).expect("valid")
    }

    pub fn student_t(df: f64) -> Result<Self> {
        Self::new(BaselineKind::StudentT, Some(df))
    }

    pub fn exponential_power(power: f64) -> Result<Self> {
        Self::new(BaselineKind::ExponentialPower, Some(power))
    }

    pub fn sinh_arcsinh(tail: f64) -> Result<Self> {
        Self::new(BaselineKind::SinhArcsinh, Some(tail))
    }

    pub fn kind(&self) -> BaselineKind {
        self.kind
    }

    pub fn delta(&self) -> Option<f64> {
        self.kind.has_delta().then_some(self.delta)
    }

    /// Same family with a different tail parameter.
    pub fn with_delta(&self, delta: Option<f64>) -> Result<Self> {
        Self::new(self.kind, delta)
    }

    fn normal_limit(&self) -> bool {
        self.kind == BaselineKind::StudentT && self.delta > STUDENT_T_NORMAL_LIMIT
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.density(x))
    }

    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.ln_density(x))
    }

    /// `S(x; δ)`; `x` may be infinite.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_not_nan(x)?;
        Ok(self.cdf_at(x))
    }

    /// `1 − S(x; δ)`, accurate in the right tail.
    pub fn sf(&self, x: f64) -> Result<f64> {
        check_not_nan(x)?;
        Ok(self.sf_at(x))
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("probability must lie in (0, 1), got {p}")));
        }
        Ok(self.quantile_at(p))
    }

    /// Inverse-transform draw `S⁻¹(U)` with `U ~ Uniform(0, 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile_at(u)
    }

    pub(crate) fn density(&self, x: f64) -> f64 {
        if self.kind == BaselineKind::Normal || self.normal_limit() {
            special::norm_pdf(x)
        } else {
            self.ln_density(x).exp()
        }
    }

    pub(crate) fn ln_density(&self, x: f64) -> f64 {
        match self.kind {
            BaselineKind::Normal => special::norm_ln_pdf(x),
            BaselineKind::Logistic => {
                let a = x.abs();
                -a - 2.0 * (-a).exp().ln_1p()
            }
            BaselineKind::Laplace => -LN_2 - x.abs(),
            BaselineKind::ExponentialPower => self.ln_norm - x.abs().powf(self.delta),
            BaselineKind::SinhArcsinh => {
                let w = self.delta * x.asinh();
                let s = w.sinh();
                let aw = w.abs();
                let ln_cosh = aw + (-2.0 * aw).exp().ln_1p() - LN_2;
                self.delta.ln() - LN_SQRT_2PI - 0.5 * s * s + ln_cosh - x.hypot(1.0).ln()
            }
            BaselineKind::StudentT => {
                if self.normal_limit() {
                    return special::norm_ln_pdf(x);
                }
                let r = x.abs() / self.delta.sqrt();
                let ln1p = if r < 1e150 {
                    (r * r).ln_1p()
                } else {
                    2.0 * r.ln()
                };
                self.ln_norm - 0.5 * (self.delta + 1.0) * ln1p
            }
        }
    }

    pub(crate) fn cdf_at(&self, x: f64) -> f64 {
        self.sf_at(-x)
    }

    pub(crate) fn sf_at(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match self.kind {
            BaselineKind::Normal => special::norm_sf(x),
            BaselineKind::Logistic => {
                if x >= 0.0 {
                    let e = (-x).exp();
                    e / (1.0 + e)
                } else {
                    1.0 / (1.0 + x.exp())
                }
            }
            BaselineKind::Laplace => {
                if x >= 0.0 {
                    0.5 * (-x).exp()
                } else {
                    1.0 - 0.5 * x.exp()
                }
            }
            BaselineKind::ExponentialPower => {
                let z = x.abs().powf(self.delta);
                let shape = 1.0 / self.delta;
                if x >= 0.0 {
                    0.5 * special::reg_upper_gamma(shape, z)
                } else {
                    0.5 + 0.5 * special::reg_lower_gamma(shape, z)
                }
            }
            BaselineKind::SinhArcsinh => special::norm_sf((self.delta * x.asinh()).sinh()),
            BaselineKind::StudentT => {
                if self.normal_limit() {
                    special::norm_sf(x)
                } else {
                    special::student_t_sf(x, self.delta)
                }
            }
        }
    }

    /// `ln(1 − S(x))`, finite where the tail probability underflows when
    /// the family allows it.
    pub(crate) fn ln_sf_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return (-self.sf_at(-x)).ln_1p();
        }
        match self.kind {
            BaselineKind::Normal => special::norm_ln_sf(x),
            BaselineKind::Logistic => -(x + (-x).exp().ln_1p()),
            BaselineKind::Laplace => -LN_2 - x,
            BaselineKind::ExponentialPower => {
                -LN_2 + special::ln_reg_upper_gamma(1.0 / self.delta, x.powf(self.delta))
            }
            BaselineKind::SinhArcsinh => special::norm_ln_sf((self.delta * x.asinh()).sinh()),
            BaselineKind::StudentT => {
                if self.normal_limit() {
                    special::norm_ln_sf(x)
                } else {
                    special::student_t_ln_sf(x, self.delta)
                }
            }
        }
    }

    pub(crate) fn ln_cdf_at(&self, x: f64) -> f64 {
        self.ln_sf_at(-x)
    }

    pub(crate) fn quantile_at(&self, p: f64) -> f64 {
        if p <= 0.5 {
            self.quantile_lower(p)
        } else {
            -self.quantile_lower(1.0 - p)
        }
    }

    /// Quantile for a lower-tail probability `p ≤ ½` (result ≤ 0).
    pub(crate) fn quantile_lower(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if p == 0.5 {
            return 0.0;
        }
        match self.kind {
            BaselineKind::Normal => special::norm_quantile_lower(p),
            BaselineKind::Logistic => (p / (1.0 - p)).ln(),
            BaselineKind::Laplace => (2.0 * p).ln(),
            BaselineKind::SinhArcsinh => {
                (special::norm_quantile_lower(p).asinh() / self.delta).sinh()
            }
            BaselineKind::StudentT if self.normal_limit() => special::norm_quantile_lower(p),
            BaselineKind::StudentT if self.delta == 1.0 => {
                -(std::f64::consts::PI * (0.5 - p)).tan()
            }
            BaselineKind::StudentT if self.delta == 2.0 => {
                (2.0 * p - 1.0) / (2.0 * p * (1.0 - p)).sqrt()
            }
            BaselineKind::StudentT | BaselineKind::ExponentialPower => -self.invert_tail(p),
        }
    }

    /// Solves `1 − S(x) = p` for `x ≥ 0` (with `p < ½`) by safeguarded Newton
    /// iteration on `ln(1 − S(x))`.
    fn invert_tail(&self, p: f64) -> f64 {
        let target = p.ln();
        let g = |x: f64| self.ln_sf_at(x) - target;
        let mut lo = 0.0;
        let mut hi = 1.0;
        while g(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let gx = g(x);
            if gx == 0.0 {
                return x;
            }
            if gx > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            // d/dx ln(1 − S(x)) = −s(x)/(1 − S(x))
            let slope = -(self.ln_density(x) - self.ln_sf_at(x)).exp();
            let mut next = x - gx / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if hi / lo.max(f64::MIN_POSITIVE) > 4.0 && lo > 0.0 {
                    (lo * hi).sqrt()
                } else {
                    0.5 * (lo + hi)
                };
            }
            let done = (next - x).abs() <= 1e-15 * x.abs().max(1.0)
                || (hi - lo) <= 1e-15 * hi.abs().max(1.0);
            x = next;
            if done {
                break;
            }
        }
        x
    }

    /// `∫₀^∞ z s(z) dz`, the half first absolute moment; `None` when it diverges.
    pub fn half_mean(&self) -> Option<f64> {
        let m = match self.kind {
            BaselineKind::Normal => special::FRAC_1_SQRT_2PI,
            BaselineKind::Logistic => LN_2,
            BaselineKind::Laplace => 0.5,
            BaselineKind::ExponentialPower => {
                (special::ln_gamma(2.0 / self.delta) - special::ln_gamma(1.0 / self.delta)).exp()
                    / 2.0
            }
            BaselineKind::StudentT => {
                if self.delta <= 1.0 {
                    return None;
                }
                if self.normal_limit() {
                    special::FRAC_1_SQRT_2PI
                } else {
                    let nu = self.delta;
                    (nu.sqrt() * special::ln_gamma_diff(0.5 * nu, 0.5).exp())
                        / (std::f64::consts::PI.sqrt() * (nu - 1.0))
                }
            }
            BaselineKind::SinhArcsinh => {
                quad::integrate_upper(|z| z * self.density(z), 0.0, QuadOptions::default()).value
            }
        };
        Some(m)
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.delta() {
            Some(d) => write!(f, "{}(delta={d})", self.kind.token()),
            None => f.write_str(self.kind.token()),
        }
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("argument must be finite, got {x}")))
    }
}

fn check_not_nan(x: f64) -> Result<()> {
    if x.is_nan() {
        Err(Error::domain("argument is NaN"))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_real_line;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_families() -> Vec<Baseline> {
        vec![
            Baseline::normal(),
            Baseline::logistic(),
            Baseline::laplace(),
            Baseline::student_t(0.7).unwrap(),
            Baseline::student_t(3.0).unwrap(),
            Baseline::student_t(40.0).unwrap(),
            Baseline::exponential_power(0.6).unwrap(),
            Baseline::exponential_power(1.5).unwrap(),
            Baseline::exponential_power(4.0).unwrap(),
            Baseline::sinh_arcsinh(0.5).unwrap(),
            Baseline::sinh_arcsinh(1.22).unwrap(),
            Baseline::sinh_arcsinh(3.0).unwrap(),
        ]
    }

    #[test]
    fn pdf_examples() {
        let n = Baseline::normal();
        assert!((n.pdf(0.0).unwrap() - 0.398_942_280_401_432_7).abs() < 1e-16);
        let sas = Baseline::sinh_arcsinh(1.0).unwrap();
        assert!((sas.pdf(0.7).unwrap() - special::norm_pdf(0.7)).abs() < 1e-15);
        // mpmath, 50 digits: Γ(3/2)/(√(2π)Γ(1)) (1 + 1.69/2)^(−3/2)
        let t2 = Baseline::student_t(2.0).unwrap();
        assert!((t2.pdf(1.3).unwrap() - 0.141_078_375_689_797_7).abs() < 1e-15);
    }

    #[test]
    fn log_pdf_examples() {
        let n = Baseline::normal();
        assert_eq!(n.ln_pdf(0.0).unwrap(), -LN_SQRT_2PI);
        let lap = Baseline::laplace();
        assert!((lap.ln_pdf(40.0).unwrap() - (0.5f64.ln() - 40.0)).abs() < 1e-13);
        // mpmath: log of the Cauchy density at 1e6
        let cauchy = Baseline::student_t(1.0).unwrap();
        let v = cauchy.ln_pdf(1e6).unwrap();
        assert!((v - (-28.775_751_001_778_948)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(Baseline::logistic().cdf(0.0).unwrap(), 0.5);
        let ep2 = Baseline::exponential_power(2.0).unwrap();
        let expected = special::norm_cdf(std::f64::consts::SQRT_2);
        assert!((ep2.cdf(1.0).unwrap() - expected).abs() < 1e-14);
        assert!((ep2.cdf(1.0).unwrap() - 0.921_350_396_474_857_3).abs() < 1e-12);
    }

    #[test]
    fn cdf_matches_quadrature_of_pdf() {
        let opts = QuadOptions::default();
        for fam in all_families() {
            for &x in &[-7.5, -2.0, -0.3, 0.4, 1.0, 3.3] {
                let q = quad::integrate_lower(|z| fam.density(z), x, opts).value;
                let c = fam.cdf(x).unwrap();
                assert!((q - c).abs() < 1e-11, "{fam} x={x}: quad {q} vs cdf {c}");
            }
        }
    }

    #[test]
    fn quantile_examples() {
        for fam in all_families() {
            assert_eq!(fam.quantile(0.5).unwrap(), 0.0);
        }
        let l = Baseline::logistic().quantile(0.75).unwrap();
        assert!((l - 3f64.ln()).abs() < 1e-15);
        // bisection oracle on the CDF
        let t3 = Baseline::student_t(3.0).unwrap();
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if t3.cdf(mid).unwrap() < 0.9 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((t3.quantile(0.9).unwrap() - 0.5 * (lo + hi)).abs() < 1e-12);
    }

    #[test]
    fn quantile_rejects_bad_probability() {
        let n = Baseline::normal();
        assert!(n.quantile(0.0).is_err());
        assert!(n.quantile(1.0).is_err());
        assert!(n.quantile(f64::NAN).is_err());
    }

    #[test]
    fn invalid_delta_rejected() {
        assert!(Baseline::student_t(0.0).is_err());
        assert!(Baseline::student_t(-1.0).is_err());
        assert!(Baseline::sinh_arcsinh(f64::NAN).is_err());
        assert!(Baseline::new(BaselineKind::Normal, Some(1.0)).is_err());
        assert!(Baseline::new(BaselineKind::ExponentialPower, None).is_err());
        assert!(Baseline::normal().pdf(f64::INFINITY).is_err());
    }

    #[test]
    fn symmetry_and_half_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for fam in all_families() {
            assert_eq!(fam.cdf(0.0).unwrap(), 0.5, "{fam}");
            for _ in 0..1000 {
                let x: f64 = rng.gen_range(-30.0..30.0);
                assert!((fam.density(x) - fam.density(-x)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn normalization() {
        for fam in all_families() {
            let q = integrate_real_line(|x| fam.density(x), 0.0, QuadOptions::default());
            assert!((q.value - 1.0).abs() < 1e-9, "{fam}: {}", q.value);
        }
    }

    #[test]
    fn cdf_derivative_matches_pdf() {
        for fam in all_families() {
            for i in 0..100 {
                let x = -6.0 + 12.0 * (i as f64 + 0.5) / 100.0;
                let h = 1e-6 * x.abs().max(1.0);
                let d = if x < 0.0 {
                    (fam.cdf_at(x + h) - fam.cdf_at(x - h)) / (2.0 * h)
                } else {
                    (fam.sf_at(x - h) - fam.sf_at(x + h)) / (2.0 * h)
                };
                let p = fam.density(x);
                if p < 1e-200 {
                    continue;
                }
                assert!(((d - p) / p).abs() < 1e-6, "{fam} x={x}: {d} vs {p}");
            }
        }
    }

    #[test]
    fn quantile_inversion() {
        let probs = [1e-6, 1e-4, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0 - 1e-4, 1.0 - 1e-6];
        for fam in all_families() {
            for &p in &probs {
                let x = fam.quantile(p).unwrap();
                assert!((fam.cdf_at(x) - p).abs() < 1e-10, "{fam} p={p}");
            }
        }
    }

    #[test]
    fn limits() {
        let t = Baseline::student_t(1e6).unwrap();
        let n = Baseline::normal();
        let lap = Baseline::laplace();
        let ep1 = Baseline::exponential_power(1.0).unwrap();
        let sas1 = Baseline::sinh_arcsinh(1.0).unwrap();
        for i in 0..=200 {
            let x = -5.0 + 10.0 * i as f64 / 200.0;
            assert!((t.density(x) - n.density(x)).abs() < 1e-5);
            assert_eq!(ep1.density(x), lap.density(x));
            assert!((sas1.density(x) - n.density(x)).abs() < 1e-12);
        }
        let huge = Baseline::student_t(1e8).unwrap();
        assert_eq!(huge.density(0.3), n.density(0.3));
    }

    #[test]
    fn half_mean_matches_quadrature() {
        for fam in all_families() {
            let q = quad::integrate_upper(|z| z * fam.density(z), 0.0, QuadOptions::default());
            match fam.half_mean() {
                Some(m) => assert!((m - q.value).abs() < 1e-9, "{fam}: {m} vs {}", q.value),
                None => assert_eq!(fam.kind(), BaselineKind::StudentT),
            }
        }
        assert!(Baseline::student_t(1.0).unwrap().half_mean().is_none());
    }

    #[test]
    fn sampling_is_seeded_and_centred() {
        let lg = Baseline::logistic();
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100_000).map(|_| lg.sample(&mut a)).collect();
        let ys: Vec<f64> = (0..100_000).map(|_| lg.sample(&mut b)).collect();
        assert_eq!(xs, ys);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.05);
    }

    #[test]
    fn sas_cdf_matches_quadrature() {
        let sas = Baseline::sinh_arcsinh(2.0).unwrap();
        let q = quad::integrate_lower(|z| sas.density(z), 1.0, QuadOptions::default()).value;
        assert!((sas.cdf(1.0).unwrap() - q).abs() < 1e-12);
    }

    #[test]
    fn normal_draws_pass_ks() {
        let n = Baseline::normal();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut xs: Vec<f64> = (0..100_000).map(|_| n.sample(&mut rng)).collect();
        assert!(crate::testutil::ks_distance(&mut xs, special::norm_cdf) < 0.01);
    }

    #[test]
    fn sas_draws_have_no_skew() {
        let sas = Baseline::sinh_arcsinh(0.75).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..100_000).map(|_| sas.sample(&mut rng)).collect();
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
        let m3 = xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
        assert!((m3 / m2.powf(1.5)).abs() < 0.1);
    }
}
