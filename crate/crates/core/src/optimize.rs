//! Derivative-free minimization on the probability simplex.

use serde::{Deserialize, Serialize};

/// Settings for restarted Nelder–Mead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Shifts the low-discrepancy start sequence.
    pub seed: u64,
    /// Stop once the simplex diameter falls below this.
    pub diameter_tol: f64,
    pub max_iterations: usize,
    /// Half-width of the box the restart points are drawn from.
    pub start_radius: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0,
            diameter_tol: 1e-8,
            max_iterations: 5000,
            start_radius: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in simplex.iter().enumerate() {
        for b in &simplex[i + 1..] {
            let d = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            best = best.max(d);
        }
    }
    best
}

/// Relative vertex-value spread treated as converged. Needed where the
/// minimum sits on a flat ridge or at infinity in logit space.
pub const VALUE_SPREAD_TOL: f64 = 1e-14;

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Stops when the simplex diameter drops below `tol` or the vertex values agree
/// to `VALUE_SPREAD_TOL`.
pub fn nelder_mead(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_iterations: usize,
) -> Minimum {
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            converged: true,
        };
    }
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let point = |c: &[f64], worst: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(worst).map(|(c, w)| c + t * (w - c)).collect()
    };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let spread = values[n] - values[0];
        if diameter(&simplex) < tol || spread <= VALUE_SPREAD_TOL * (1.0 + values[0].abs()) {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = point(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = point(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (candidate, fc, threshold) = if fr < values[n] {
            let outside = point(&centroid, &worst, -0.5);
            let fo = f(&outside);
            (outside, fo, fr)
        } else {
            let inside = point(&centroid, &worst, 0.5);
            let fi = f(&inside);
            (inside, fi, values[n])
        };
        if fc <= threshold {
            simplex[n] = candidate;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for k in 1..=n {
            simplex[k] = point(&best, &simplex[k], 0.5);
            values[k] = f(&simplex[k]);
        }
    }
    let (i, value) = values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty simplex");
    Minimum {
        x: simplex[i].clone(),
        value,
        iterations,
        converged,
    }
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical inverse of `index` in the given base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut out = 0.0;
    let mut scale = 1.0 / base as f64;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale /= base as f64;
    }
    out
}

/// Halton point `index` in `[0, 1)^dim`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|k| radical_inverse(index, PRIMES[k % PRIMES.len()]))
        .collect()
}

/// `w_k = exp(x_k) / sum exp`, with an implicit trailing logit of 0.
pub fn softmax_with_anchor(x: &[f64]) -> Vec<f64> {
    let mut logits = x.to_vec();
    logits.push(0.0);
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / s).collect()
}

/// Minimize `f` over the `n`-simplex. The first start is the barycenter;
/// the rest come from a seed-shifted Halton sequence.
pub fn minimize_on_simplex(
    n: usize,
    f: impl Fn(&[f64]) -> f64,
    config: &OptimizerConfig,
) -> (Vec<f64>, Minimum) {
    let dim = n.saturating_sub(1);
    let mut objective = |x: &[f64]| {
        let v = f(&softmax_with_anchor(x));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best: Option<Minimum> = None;
    for r in 0..config.restarts.max(1) {
        let x0 = if r == 0 {
            vec![0.0; dim]
        } else {
            halton(config.seed.wrapping_add(r as u64), dim)
                .into_iter()
                .map(|u| (2.0 * u - 1.0) * config.start_radius)
                .collect()
        };
        let m = nelder_mead(
            &mut objective,
            &x0,
            0.5,
            config.diameter_tol,
            config.max_iterations,
        );
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    let best = best.expect("at least one restart");
    (softmax_with_anchor(&best.x), best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let mut f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2);
        let m = nelder_mead(&mut f, &[0.0, 0.0], 0.5, 1e-10, 10_000);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-8 && (m.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(&mut f, &[-1.2, 1.0], 0.5, 1e-10, 20_000);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn halton_prefix() {
        assert_eq!(halton(1, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(2, 2), vec![0.25, 2.0 / 3.0]);
        assert!((halton(3, 1)[0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn softmax_is_on_simplex() {
        let w = softmax_with_anchor(&[0.0, 0.0]);
        assert!(w.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let w = softmax_with_anchor(&[800.0, -800.0]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15 && w[0] > 0.999);
    }

    #[test]
    fn simplex_target() {
        let target = [0.2, 0.5, 0.3];
        let f = |w: &[f64]| {
            w.iter()
                .zip(&target)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
        };
        let (w, m) = minimize_on_simplex(3, f, &OptimizerConfig::default());
        assert!(m.value < 1e-14);
        for (a, b) in w.iter().zip(&target) {
            assert!((a - b).abs() < 1e-7);
        }
        let again = minimize_on_simplex(3, f, &OptimizerConfig::default()).0;
        assert_eq!(w, again);
    }
}
