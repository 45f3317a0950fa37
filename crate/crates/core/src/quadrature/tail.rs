//! Convergence acceleration: Wynn's epsilon algorithm for oscillatory tail
//! integrals and Neville extrapolation for limits in a small parameter.

use alloc::vec::Vec;

use super::gk::{integrate, QuadConfig, QuadratureResult};
use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

/// Accelerate a sequence of partial sums with the epsilon algorithm.
/// Returns the best even-column estimate and the spread between the last
/// two estimates as an error indicator.
pub fn wynn_epsilon(sums: &[C64]) -> Result<(C64, f64)> {
    if sums.is_empty() {
        return Err(Error::Parameter("wynn_epsilon: empty sequence"));
    }
    let n = sums.len();
    let mut col: Vec<C64> = sums.to_vec();
    let mut prev: Vec<C64> = alloc::vec![C64::new(0.0, 0.0); n + 1];
    let scale = sums.iter().map(|s| s.norm()).fold(1e-300, f64::max);

    let mut best = col[n - 1];
    let mut est = if n > 1 {
        (col[n - 1] - col[n - 2]).norm()
    } else {
        f64::INFINITY
    };

    for m in 1..n {
        let width = n - m;
        let mut next = Vec::with_capacity(width);
        for j in 0..width {
            let d = col[j + 1] - col[j];
            if d.norm() < 1e-15 * scale {
                // the previous column already converged to machine level
                return Ok((col[j + 1], d.norm()));
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        prev = core::mem::take(&mut col);
        col = next;
        if m % 2 == 0 {
            let cand = col[width - 1];
            est = (cand - best).norm();
            best = cand;
        }
    }
    Ok((best, est))
}

/// Neville polynomial extrapolation of (xs, ys) samples to the point x.
/// Returns the value and the magnitude of the last correction.
pub fn neville(xs: &[f64], ys: &[C64], x: f64) -> Result<(C64, f64)> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::Parameter("neville: need matching non-empty samples"));
    }
    let n = xs.len();
    let mut p: Vec<C64> = ys.to_vec();
    let mut last_correction = 0.0;
    for m in 1..n {
        let before = p[0];
        for j in 0..n - m {
            let denom = xs[j] - xs[j + m];
            if denom == 0.0 {
                return Err(Error::Parameter("neville: repeated abscissa"));
            }
            p[j] = ((x - xs[j + m]) * p[j] - (x - xs[j]) * p[j + 1]) / denom;
        }
        last_correction = (p[0] - before).norm();
    }
    Ok((p[0], last_correction))
}

/// Integrate f from `start` to infinity when f oscillates with a known
/// half-period: sum panel integrals and accelerate the partial sums.
pub fn oscillatory_tail(
    mut f: impl FnMut(f64) -> C64,
    start: f64,
    half_period: f64,
    tol: f64,
    max_panels: usize,
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    if !half_period.is_finite() || half_period <= 0.0 {
        return Err(Error::Parameter("oscillatory_tail: bad half-period"));
    }
    if max_panels < 4 {
        return Err(Error::Parameter("oscillatory_tail: need at least 4 panels"));
    }
    let mut sums = Vec::with_capacity(max_panels);
    let mut running = C64::new(0.0, 0.0);
    let mut n_evals = 0;
    let mut quad_err = 0.0;
    for j in 0..max_panels {
        let lo = start + j as f64 * half_period;
        let hi = lo + half_period;
        let r = integrate(&mut f, lo, hi, cfg)?;
        running += r.value;
        n_evals += r.n_evals;
        quad_err += r.abs_err;
        sums.push(running);
        if sums.len() >= 4 {
            let (value, est) = wynn_epsilon(&sums)?;
            if est < tol {
                return Ok(QuadratureResult {
                    value,
                    abs_err: est + quad_err,
                    n_evals,
                    converged: true,
                });
            }
        }
    }
    let (value, est) = wynn_epsilon(&sums)?;
    Ok(QuadratureResult {
        value,
        abs_err: est + quad_err,
        n_evals,
        converged: est < tol,
    })
}
