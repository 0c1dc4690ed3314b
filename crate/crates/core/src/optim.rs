//! Derivative-free minimisation by the Nelder–Mead simplex method with
//! dimension-adaptive coefficients (Gao & Han).

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once both the simplex diameter (relative for coordinates above 1
    /// in magnitude) and the spread of function values fall below this.
    pub tolerance: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimises `f` from `x0`, with the initial simplex spanned by `x0 + steps[i]·eᵢ`.
///
/// Non-finite function values are treated as `+∞`, so infeasible regions
/// repel the simplex.
pub fn minimize<F>(mut f: F, x0: &[f64], steps: &[f64], opts: NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0);
        return Minimum {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations: 1,
            converged: true,
        };
    }

    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += if steps[i] != 0.0 { steps[i] } else { 0.05 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while iterations < opts.max_iterations {
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        let diameter = simplex
            .iter()
            .flat_map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            })
            .fold(0.0, f64::max);
        if diameter < opts.tolerance && (spread < opts.tolerance || !spread.is_finite()) {
            converged = spread.is_finite() || values[best].is_finite();
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / nf;
            }
        }

        affine(&mut trial, &centroid, &simplex[worst], alpha);
        let f_r = eval(&trial);

        if f_r < values[best] {
            affine(&mut trial2, &centroid, &simplex[worst], alpha * gamma.max(beta));
            let f_e = eval(&trial2);
            if f_e < f_r {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_e;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second_worst] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = f_r;
            continue;
        }

        // contraction: outside if the reflection improved on the worst point
        let outside = f_r < values[worst];
        let coef = if outside { alpha * gamma } else { -gamma };
        affine(&mut trial2, &centroid, &simplex[worst], coef);
        let f_c = eval(&trial2);
        // a tie on the inside contraction shrinks instead, so a flat simplex
        // cannot cycle without getting smaller
        if (outside && f_c <= f_r) || (!outside && f_c < values[worst]) {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = f_c;
            continue;
        }

        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + delta * (*x - a);
            }
            values[i] = eval(&simplex[i]);
        }
    }

    let best = (0..=n)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("non-empty simplex");
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

/// `out = c + t·(c − w)`.
fn affine(out: &mut [f64], c: &[f64], w: &[f64], t: f64) {
    for ((o, ci), wi) in out.iter_mut().zip(c).zip(w) {
        *o = ci + t * (ci - wi);
    }
}
