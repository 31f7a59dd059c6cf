use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::dictionary::pseudo_inverse;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NnlsOptions {
    pub max_iterations: usize,
    /// Stop once `max_i |min(x_i, grad_i)|` falls below this.
    pub kkt_tolerance: f64,
    /// Finish with active-set refinement started from the accelerated
    /// iterate's support.
    pub polish: bool,
}

impl Default for NnlsOptions {
    fn default() -> Self {
        Self { max_iterations: 10_000, kkt_tolerance: 1e-8, polish: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnlsReport {
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
}

/// Solves `min_{x >= 0} ||A x - b||^2 / 2` given `gram = A^T A` and the
/// Lipschitz constant `L = ||A^T A||_2`.
///
/// Accelerated projected gradient (step `1/L`, adaptive restart) followed by
/// an optional Lawson-Hanson refinement.
pub fn nnls(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    gram: &DMatrix<f64>,
    lipschitz: f64,
    opts: &NnlsOptions,
) -> (DVector<f64>, NnlsReport) {
    let n = gram.nrows();
    let atb = &(a.transpose() * b);
    let step = 1.0 / lipschitz.max(f64::MIN_POSITIVE);
    let mut x = DVector::zeros(n);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut iterations = 0;
    let mut kkt = kkt_residual(&x, &(gram * &x - atb));
    while iterations < opts.max_iterations && kkt > opts.kkt_tolerance {
        iterations += 1;
        let grad = gram * &y - atb;
        let next = (&y - grad * step).map(|v| v.max(0.0));
        // restart momentum when the step opposes the last move
        if (&y - &next).dot(&(&next - &x)) > 0.0 {
            t = 1.0;
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = &next + (&next - &x) * ((t - 1.0) / t_next);
        x = next;
        t = t_next;
        if iterations % 10 == 0 || iterations == opts.max_iterations {
            kkt = kkt_residual(&x, &(gram * &x - atb));
        }
    }
    if opts.polish {
        // keep the refinement if it is at least as stationary and fits better
        let refined = lawson_hanson(a, b, gram, &x, 3 * n + 10);
        let refined_kkt = kkt_residual(&refined, &(gram * &refined - atb));
        let better_fit = (a * &refined - b).norm() <= (a * &x - b).norm();
        if refined_kkt <= kkt.max(opts.kkt_tolerance) && (better_fit || refined_kkt < kkt) {
            x = refined;
            kkt = refined_kkt;
        }
    }
    (x, NnlsReport { iterations, kkt_residual: kkt, converged: kkt <= opts.kkt_tolerance })
}

/// `max_i |min(x_i, g_i)|`: zero exactly at KKT points of the NNLS problem.
pub fn kkt_residual(x: &DVector<f64>, grad: &DVector<f64>) -> f64 {
    x.iter().zip(grad.iter()).map(|(xi, gi)| xi.min(*gi).abs()).fold(0.0, f64::max)
}

fn solve_on(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(passive);
    pseudo_inverse(&sub) * b
}

fn lawson_hanson(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    gram: &DMatrix<f64>,
    start: &DVector<f64>,
    max_outer: usize,
) -> DVector<f64> {
    let atb = a.transpose() * b;
    let n = gram.nrows();
    let mut x = start.clone();
    let mut passive: Vec<bool> = x.iter().map(|&v| v > 0.0).collect();
    let tol = 10.0 * f64::EPSILON * gram.diagonal().max().max(1.0) * n as f64;

    let inner = |x: &mut DVector<f64>, passive: &mut Vec<bool>| {
        for _ in 0..=n {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            if idx.is_empty() {
                x.fill(0.0);
                return;
            }
            let z = solve_on(a, b, &idx);
            if z.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = z[k];
                }
                return;
            }
            // largest step towards z that stays feasible
            let (mut alpha, mut blocking) = (1.0f64, None);
            for (k, &i) in idx.iter().enumerate() {
                if z[k] <= 0.0 && x[i] - z[k] > 0.0 && x[i] / (x[i] - z[k]) < alpha {
                    alpha = x[i] / (x[i] - z[k]);
                    blocking = Some(i);
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                x[i] += alpha * (z[k] - x[i]);
                if x[i] <= tol || Some(i) == blocking {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    };

    inner(&mut x, &mut passive);
    for _ in 0..max_outer {
        let w = &atb - gram * &x;
        let candidate = (0..n)
            .filter(|&i| !passive[i])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]).then(j.cmp(&i)));
        match candidate {
            Some(i) if w[i] > tol => passive[i] = true,
            _ => break,
        }
        inner(&mut x, &mut passive);
    }
    x
}
