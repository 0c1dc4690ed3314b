//! Shared machinery for likelihood fitting: the layout of the error-law
//! parameters on an unconstrained scale, multi-start Nelder–Mead, and the
//! profile-likelihood search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::{Baseline, BaselineKind};
use crate::error::{Error, Result};
use crate::optim::{self, Minimum, NelderMeadOptions};
use crate::twopiece::{ParamKind, Parameterisation, TwoPieceParams};

/// Which shape parameters of a two-piece law are free, and how they map to
/// the unconstrained scale used by the optimiser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ShapeLayout {
    pub baseline: BaselineKind,
    pub param: ParamKind,
    pub fixed_gamma: Option<f64>,
    pub fixed_delta: Option<f64>,
}

impl ShapeLayout {
    /// Names of the free shape parameters, in optimiser order.
    pub fn names(&self) -> Vec<&'static str> {
        let mut names = Vec::with_capacity(3);
        match self.param {
            ParamKind::RawScales => names.extend(["sigma1", "sigma2"]),
            _ => {
                names.push("sigma");
                if self.fixed_gamma.is_none() {
                    names.push("gamma");
                }
            }
        }
        if self.baseline.has_delta() && self.fixed_delta.is_none() {
            names.push("delta");
        }
        names
    }

    pub fn len(&self) -> usize {
        self.names().len()
    }

    /// Maps a natural-scale value of the named parameter to the optimiser scale.
    pub fn to_internal(self, name: &str, value: f64) -> f64 {
        match name {
            "gamma" if self.param == ParamKind::EpsilonSkew => value.atanh(),
            _ => value.ln(),
        }
    }

    pub fn to_natural(self, name: &str, value: f64) -> f64 {
        match name {
            "gamma" if self.param == ParamKind::EpsilonSkew => value.tanh(),
            _ => value.exp(),
        }
    }

    /// Unconstrained starting vector for a given scale with a symmetric shape.
    pub fn start(&self, sigma: f64, delta: Option<f64>) -> Vec<f64> {
        let delta = delta.or(self.baseline.default_delta());
        self.names()
            .into_iter()
            .map(|name| match name {
                "sigma" | "sigma1" | "sigma2" => sigma.ln(),
                "gamma" => match self.param {
                    ParamKind::EpsilonSkew => 0.0,
                    _ => 0.0, // ln 1
                },
                "delta" => delta.expect("families with delta have a default").ln(),
                _ => unreachable!(),
            })
            .collect()
    }

    /// Initial simplex steps on the unconstrained scale.
    pub fn steps(&self) -> Vec<f64> {
        self.names()
            .into_iter()
            .map(|name| if name == "delta" { 0.5 } else { 0.3 })
            .collect()
    }

    /// Builds the two-piece law with location `mu` from unconstrained values.
    pub fn build(&self, mu: f64, theta: &[f64]) -> Result<TwoPieceParams> {
        let names = self.names();
        debug_assert_eq!(names.len(), theta.len());
        let get = |key: &str| {
            names
                .iter()
                .position(|n| *n == key)
                .map(|i| self.to_natural(key, theta[i]))
        };
        let delta = if self.baseline.has_delta() {
            Some(self.fixed_delta.or_else(|| get("delta")).expect("delta is free or fixed"))
        } else {
            None
        };
        let baseline = Baseline::new(self.baseline, delta)?;
        let (sigma, param) = match self.param {
            ParamKind::RawScales => (
                1.0,
                Parameterisation::RawScales {
                    sigma1: get("sigma1").expect("free"),
                    sigma2: get("sigma2").expect("free"),
                },
            ),
            kind => {
                let gamma = self.fixed_gamma.or_else(|| get("gamma")).expect("gamma");
                let param = match kind {
                    ParamKind::EpsilonSkew => Parameterisation::EpsilonSkew { gamma },
                    _ => Parameterisation::InverseScale { gamma },
                };
                (get("sigma").expect("free"), param)
            }
        };
        TwoPieceParams::new(mu, sigma, param, baseline)
    }

    /// Natural-scale values of the free shape parameters of `tp`.
    pub fn natural_values(&self, tp: &TwoPieceParams) -> Vec<(&'static str, f64)> {
        self.names()
            .into_iter()
            .map(|name| {
                let v = match name {
                    "sigma" => tp.sigma(),
                    "sigma1" => tp.scales().0,
                    "sigma2" => tp.scales().1,
                    "gamma" => tp.parameterisation().gamma().expect("gamma"),
                    "delta" => tp.baseline().delta().expect("delta"),
                    _ => unreachable!(),
                };
                (name, v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SearchOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

/// Minimises `objective` from `x0`, then from `restarts` jittered copies of
/// `x0`; every run is re-started from its own optimum until it stops
/// improving. Returns the best point found.
pub(crate) fn multistart<F>(objective: F, x0: &[f64], steps: &[f64], opts: SearchOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let nm = NelderMeadOptions {
        max_iterations: opts.max_iterations,
        tolerance: opts.tolerance,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let normal = Baseline::normal();
    let mut best = polished(&objective, x0, steps, nm);
    for _ in 0..opts.restarts {
        let start: Vec<f64> = x0
            .iter()
            .zip(steps)
            .map(|(x, s)| {
                x + 2.0 * s * normal.sample(&mut rng)
            })
            .collect();
        if !objective(&start).is_finite() {
            continue;
        }
        let run = polished(&objective, &start, steps, nm);
        if run.value < best.value {
            best = run;
        }
    }
    best
}

/// Nelder–Mead followed by fresh-simplex restarts at the optimum, which
/// guards against premature collapse of the simplex.
pub(crate) fn polished<F>(objective: &F, x0: &[f64], steps: &[f64], nm: NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut run = optim::minimize(objective, x0, steps, nm);
    let mut iterations = run.iterations;
    let mut evaluations = run.evaluations;
    let small: Vec<f64> = steps.iter().map(|s| 0.1 * s).collect();
    for _ in 0..4 {
        let again = optim::minimize(objective, &run.x, &small, nm);
        iterations += again.iterations;
        evaluations += again.evaluations;
        let gain = run.value - again.value;
        let improved = again.value < run.value;
        if improved {
            run = Minimum {
                converged: again.converged,
                ..again
            };
        } else {
            run.converged = run.converged && again.converged;
        }
        if !improved || gain < nm.tolerance {
            break;
        }
    }
    run.iterations = iterations;
    run.evaluations = evaluations;
    run
}

/// One side of a profile-likelihood interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ProfileEnd {
    /// Endpoint on the unconstrained scale.
    pub value: f64,
    /// The cut was not reached within the search range.
    pub open: bool,
}

/// Largest distance from the estimate searched on the unconstrained scale.
pub(crate) const PROFILE_RANGE: f64 = 8.0;

/// Finds where the profile negative log-likelihood rises by `rise` above
/// its minimum, on both sides of the estimate.
///
/// `inner(j, t, warm)` returns the minimum of the objective over all
/// coordinates except `j`, held at `t`, along with the minimising vector.
pub(crate) fn profile_bounds<P>(
    inner: P,
    index: usize,
    estimate: &[f64],
    min_value: f64,
    rise: f64,
) -> Result<(ProfileEnd, ProfileEnd)>
where
    P: Fn(usize, f64, &[f64]) -> (f64, Vec<f64>),
{
    if !(rise > 0.0) {
        return Err(Error::domain("profile cut must lie in (0, 1)"));
    }
    let lower = profile_side(&inner, index, estimate, min_value, rise, -1.0);
    let upper = profile_side(&inner, index, estimate, min_value, rise, 1.0);
    Ok((lower, upper))
}

fn profile_side<P>(
    inner: &P,
    index: usize,
    estimate: &[f64],
    min_value: f64,
    rise: f64,
    direction: f64,
) -> ProfileEnd
where
    P: Fn(usize, f64, &[f64]) -> (f64, Vec<f64>),
{
    let centre = estimate[index];
    let g = |t: f64, warm: &[f64]| {
        let (v, x) = inner(index, t, warm);
        (v - min_value - rise, x)
    };
    // walk outward with growing steps until the cut is crossed
    let mut inside_t = centre;
    let mut inside_g = -rise;
    let mut warm = estimate.to_vec();
    let mut step = 0.05;
    loop {
        let dist = ((inside_t - centre).abs() + step).min(PROFILE_RANGE);
        let t = centre + direction * dist;
        let (gt, x) = g(t, &warm);
        if gt >= 0.0 {
            let (lo, hi) = (inside_t, t);
            let root = illinois(|s| g(s, &x).0, lo, inside_g, hi, gt);
            return ProfileEnd {
                value: root,
                open: false,
            };
        }
        inside_t = t;
        inside_g = gt;
        warm = x;
        if dist >= PROFILE_RANGE {
            return ProfileEnd {
                value: t,
                open: true,
            };
        }
        step *= 1.6;
    }
}

/// Illinois variant of regula falsi on a bracket with a sign change.
fn illinois<F: Fn(f64) -> f64>(f: F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..100 {
        if (b - a).abs() < 1e-9 * a.abs().max(1.0) {
            break;
        }
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) {
            c
        } else {
            0.5 * (a + b)
        };
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc < 0.0) == (fa < 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

/// Inner optimiser settings for profile points.
pub(crate) fn profile_options(opts: SearchOptions) -> NelderMeadOptions {
    NelderMeadOptions {
        max_iterations: opts.max_iterations,
        tolerance: opts.tolerance.min(1e-10),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        let layout = ShapeLayout {
            baseline: BaselineKind::SinhArcsinh,
            param: ParamKind::EpsilonSkew,
            fixed_gamma: None,
            fixed_delta: None,
        };
        assert_eq!(layout.names(), vec!["sigma", "gamma", "delta"]);
        let theta: Vec<f64> = [("sigma", 1.3), ("gamma", -0.4), ("delta", 0.7)]
            .iter()
            .map(|(n, v)| layout.to_internal(n, *v))
            .collect();
        let tp = layout.build(0.2, &theta).unwrap();
        let back = layout.natural_values(&tp);
        for ((_, v), want) in back.iter().zip([1.3, -0.4, 0.7]) {
            assert!((v - want).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_parameters_are_not_free() {
        let layout = ShapeLayout {
            baseline: BaselineKind::Normal,
            param: ParamKind::EpsilonSkew,
            fixed_gamma: Some(0.0),
            fixed_delta: None,
        };
        assert_eq!(layout.names(), vec!["sigma"]);
        let tp = layout.build(1.0, &[0.0]).unwrap();
        assert_eq!(tp.parameterisation(), Parameterisation::EpsilonSkew { gamma: 0.0 });
    }

    #[test]
    fn profile_of_a_quadratic() {
        // f(x, y) = ½(x² + y² + xy) ⇒ profile in x is (3/8)x²
        let f = |x: &[f64]| 0.5 * (x[0] * x[0] + x[1] * x[1] + x[0] * x[1]);
        let inner = |j: usize, t: f64, warm: &[f64]| {
            let other = 1 - j;
            let g = |y: &[f64]| {
                let mut v = [0.0; 2];
                v[j] = t;
                v[other] = y[0];
                f(&v)
            };
            let m = optim::minimize(g, &[warm[other]], &[0.1], NelderMeadOptions {
                max_iterations: 1000,
                tolerance: 1e-12,
            });
            let mut v = warm.to_vec();
            v[j] = t;
            v[other] = m.x[0];
            (m.value, v)
        };
        let (lo, hi) = profile_bounds(inner, 0, &[0.0, 0.0], 0.0, 1.5).unwrap();
        let expected = (1.5f64 / 0.375).sqrt();
        assert!(!lo.open && !hi.open);
        assert!((hi.value - expected).abs() < 1e-6);
        assert!((lo.value + expected).abs() < 1e-6);
    }

    #[test]
    fn flat_profile_is_open() {
        let inner = |_: usize, t: f64, warm: &[f64]| {
            let mut v = warm.to_vec();
            v[0] = t;
            (if t < 0.0 { t * t } else { 0.0 }, v)
        };
        let (lo, hi) = profile_bounds(inner, 0, &[0.0], 0.0, 1.0).unwrap();
        assert!(!lo.open && (lo.value + 1.0).abs() < 1e-6);
        assert!(hi.open);
        assert_eq!(hi.value, PROFILE_RANGE);
    }

    #[test]
    fn multistart_finds_global_minimum() {
        // two wells, the deeper one away from the start
        let f = |x: &[f64]| {
            let a = (x[0] - 1.0).powi(2);
            let b = (x[0] + 2.0).powi(2) - 0.5;
            a.min(b)
        };
        let opts = SearchOptions {
            max_iterations: 1000,
            tolerance: 1e-10,
            restarts: 10,
            seed: 3,
        };
        let m = multistart(f, &[1.0], &[1.0], opts);
        assert!((m.x[0] + 2.0).abs() < 1e-6);
    }
}
