//! Fitting of simulation data: the low-rate scaling ansatz
//! `P_fail = beta * (N p)^(alpha d + gamma)` and the finite-size threshold
//! crossing `P_fail = A x^2 + B x + C` with `x = (p - p_c) d^(1/nu0)`.
//!
//! Logarithms are natural throughout; the reported `(N, beta)` are converted
//! so the ansatz reproduces `P_fail` independently of the base.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::noise::MCResult;
use crate::{Error, Result};

/// Points with `P_fail` below this fraction are dropped before fitting.
pub const DEFAULT_DISCARD: f64 = 5e-6;

/// Ordinary least squares; returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let (slope, intercept, r2, _) = ols(xs, ys)?;
    Ok((slope, intercept, r2))
}

fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit("need at least two (x, y) points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all x values are equal"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    // standard error of the slope
    let stderr = if xs.len() > 2 { (ss_res / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok((slope, intercept, r2, stderr))
}

/// Per-distance line fit of `ln P_fail` against `ln p`.
#[derive(Clone, Debug, Serialize)]
pub struct PerDistanceFit {
    pub d: u32,
    pub gradient: f64,
    pub intercept: f64,
    pub points_used: usize,
}

/// Parameters of the low-rate ansatz.
#[derive(Clone, Debug, Serialize)]
pub struct LowPFit {
    pub alpha: f64,
    pub gamma: f64,
    pub n_entropy: f64,
    pub beta: f64,
    /// Standard error of the fitted `alpha` (slope of the gradient line).
    pub alpha_stderr: f64,
    pub per_d: Vec<PerDistanceFit>,
    pub discard_threshold: f64,
    pub discarded_points: usize,
}

/// Evaluates the ansatz; handy for synthesis and round-trip checks.
pub fn ansatz_pfail(alpha: f64, gamma: f64, n_entropy: f64, beta: f64, d: u32, p: f64) -> f64 {
    beta * (n_entropy * p).powf(alpha * d as f64 + gamma)
}

pub fn fit_lowp(data: &[MCResult]) -> Result<LowPFit> {
    fit_lowp_with(data, DEFAULT_DISCARD)
}

/// Fits the ansatz: per-distance lines in log-log space, then lines in `d`
/// for the gradients and intercepts.
pub fn fit_lowp_with(data: &[MCResult], discard_threshold: f64) -> Result<LowPFit> {
    let mut by_d: BTreeMap<u32, Vec<&MCResult>> = BTreeMap::new();
    let mut discarded = 0usize;
    for point in data {
        if point.p_fail >= discard_threshold && point.p_fail > 0.0 {
            by_d.entry(point.d).or_default().push(point);
        } else {
            discarded += 1;
        }
    }
    // a distance that appears in the input but loses all its points is an error
    for point in data {
        let usable = by_d.get(&point.d).map_or(0, |v| v.len());
        if usable < 3 {
            return Err(Error::InsufficientData { d: point.d, points: usable, needed: 3 });
        }
    }
    if by_d.len() < 3 {
        return Err(Error::InsufficientDistances { got: by_d.len(), needed: 3 });
    }

    let mut per_d = Vec::new();
    for (&d, points) in &by_d {
        let xs: Vec<f64> = points.iter().map(|m| m.p.ln()).collect();
        let ys: Vec<f64> = points.iter().map(|m| m.p_fail.ln()).collect();
        let (gradient, intercept, _, _) = ols(&xs, &ys)?;
        per_d.push(PerDistanceFit { d, gradient, intercept, points_used: points.len() });
    }

    let ds: Vec<f64> = per_d.iter().map(|f| f.d as f64).collect();
    let gs: Vec<f64> = per_d.iter().map(|f| f.gradient).collect();
    let as_: Vec<f64> = per_d.iter().map(|f| f.intercept).collect();
    let (alpha, gamma, _, alpha_stderr) = ols(&ds, &gs)?;
    let (a_slope, a_intercept, _, _) = ols(&ds, &as_)?;
    // A(d) = (alpha d + gamma) ln N + ln beta
    let ln_n = a_slope / alpha;
    let ln_beta = a_intercept - gamma * ln_n;
    Ok(LowPFit {
        alpha,
        gamma,
        n_entropy: ln_n.exp(),
        beta: ln_beta.exp(),
        alpha_stderr,
        per_d,
        discard_threshold,
        discarded_points: discarded,
    })
}

/// Parameters of the finite-size crossing fit.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdFit {
    pub p_c: f64,
    pub nu0: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub window: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
    /// Residual after every accepted step; decreases monotonically.
    pub residual_trace: Vec<f64>,
    pub points_used: usize,
}

/// Evaluates the crossing form.
pub fn crossing_pfail(p_c: f64, nu0: f64, a: f64, b: f64, c: f64, d: u32, p: f64) -> f64 {
    let x = (p - p_c) * (d as f64).powf(1.0 / nu0);
    a * x * x + b * x + c
}

pub const DEFAULT_WINDOW: (f64, f64) = (0.07, 0.11);
pub const DEFAULT_INIT: (f64, f64) = (0.09, 1.5);

const MAX_ITERATIONS: usize = 1000;
const STEP_TOLERANCE: f64 = 1e-10;

/// Damped least squares over `(p_c, nu0, A, B, C)`; points are weighted by
/// `1/stderr^2` when a standard error is present.
pub fn fit_threshold(
    data: &[MCResult],
    init: (f64, f64),
    window: (f64, f64),
) -> Result<ThresholdFit> {
    let points: Vec<&MCResult> =
        data.iter().filter(|m| m.p >= window.0 && m.p <= window.1).collect();
    let mut distances: Vec<u32> = points.iter().map(|m| m.d).collect();
    distances.sort_unstable();
    distances.dedup();
    if distances.len() < 3 {
        return Err(Error::InsufficientDistances { got: distances.len(), needed: 3 });
    }
    if points.len() < 6 {
        return Err(Error::DegenerateFit("not enough points inside the fit window"));
    }
    let weights: Vec<f64> = points
        .iter()
        .map(|m| if m.stderr > 0.0 { 1.0 / m.stderr } else { 1.0 })
        .collect();

    // theta = [p_c, nu0, a, b, c]; seed the quadratic coefficients mildly
    let c0 = points.iter().map(|m| m.p_fail).sum::<f64>() / points.len() as f64;
    let mut theta = [init.0, init.1, 0.0, 0.5, c0];
    let residual_of = |theta: &[f64; 5]| -> f64 {
        points
            .iter()
            .zip(&weights)
            .map(|(m, w)| {
                let f = crossing_pfail(theta[0], theta[1], theta[2], theta[3], theta[4], m.d, m.p);
                let r = w * (m.p_fail - f);
                r * r
            })
            .sum()
    };

    let mut lambda = 1e-3;
    let mut residual = residual_of(&theta);
    let mut trace = vec![residual];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        // assemble damped normal equations
        let mut jtj = [[0.0f64; 5]; 5];
        let mut jtr = [0.0f64; 5];
        for (m, w) in points.iter().zip(&weights) {
            let dpow = (m.d as f64).powf(1.0 / theta[1]);
            let x = (m.p - theta[0]) * dpow;
            let f = theta[2] * x * x + theta[3] * x + theta[4];
            let dfdx = 2.0 * theta[2] * x + theta[3];
            let grad = [
                -dfdx * dpow,
                -dfdx * (m.p - theta[0]) * dpow * (m.d as f64).ln() / (theta[1] * theta[1]),
                x * x,
                x,
                1.0,
            ];
            let r = m.p_fail - f;
            for i in 0..5 {
                jtr[i] += w * w * grad[i] * r;
                for j in 0..5 {
                    jtj[i][j] += w * w * grad[i] * grad[j];
                }
            }
        }
        let mut damped = jtj;
        for (i, row) in damped.iter_mut().enumerate() {
            row[i] += lambda * jtj[i][i].max(1e-12);
        }
        let Some(step) = solve5(damped, jtr) else {
            lambda *= 10.0;
            if lambda > 1e12 {
                return Err(Error::FitDiverged { iterations, residual });
            }
            continue;
        };
        let mut candidate = theta;
        for i in 0..5 {
            candidate[i] += step[i];
        }
        // keep the exponent physical
        if candidate[1] <= 0.05 {
            candidate[1] = 0.05;
        }
        let cand_residual = residual_of(&candidate);
        if cand_residual <= residual {
            let max_step = step.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            theta = candidate;
            residual = cand_residual;
            trace.push(residual);
            lambda = (lambda * 0.3).max(1e-14);
            if max_step < STEP_TOLERANCE {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    if iterations >= MAX_ITERATIONS {
        return Err(Error::FitDiverged { iterations, residual });
    }
    let [p_c, nu0, a, b, c] = theta;
    if !(window.0 < p_c && p_c < window.1) {
        return Err(Error::DegenerateFit("threshold estimate left the fit window"));
    }
    Ok(ThresholdFit {
        p_c,
        nu0,
        a,
        b,
        c,
        window,
        residual,
        iterations,
        residual_trace: trace,
        points_used: points.len(),
    })
}

/// Gaussian elimination with partial pivoting on a 5x5 system.
fn solve5(mut m: [[f64; 5]; 5], mut rhs: [f64; 5]) -> Option<[f64; 5]> {
    for col in 0..5 {
        let pivot = (col..5).max_by(|&a, &b| {
            m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap()
        })?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..5 {
            let factor = m[row][col] / m[col][col];
            for k in col..5 {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [0.0; 5];
    for row in (0..5).rev() {
        let mut acc = rhs[row];
        for k in row + 1..5 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}
