//! Principal-value integrals with one simple pole inside the interval.
//!
//! Symmetric excision of half-width e around the pole leaves an error that
//! is odd in e (c1 e + c3 e^3 + ...), so evaluating at e, e/2, e/4 and
//! Richardson-eliminating the two leading powers recovers the principal
//! value to high order.

use super::gk::{integrate, QuadConfig, QuadratureResult};
use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

/// Principal value of the integral of g(k) / (k - k0) over [lo, hi].
///
/// `g` must be smooth across the pole; `eps` is the largest excision
/// half-width used and must keep `k0 +- eps` inside the interval.
pub fn pv_integral(
    mut g: impl FnMut(f64) -> C64,
    lo: f64,
    hi: f64,
    k0: f64,
    eps: f64,
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Parameter("pv_integral: empty interval"));
    }
    if !(lo + eps < k0 && k0 < hi - eps) {
        return Err(Error::Parameter(
            "pv_integral: pole too close to an endpoint",
        ));
    }
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::Parameter(
            "pv_integral: excision width must be positive",
        ));
    }

    let mut n_evals = 0;
    let mut abs_err = 0.0;
    let mut converged = true;
    let mut excised = |e: f64| -> Result<C64> {
        let left = integrate(|k| g(k) / (k - k0), lo, k0 - e, cfg)?;
        let right = integrate(|k| g(k) / (k - k0), k0 + e, hi, cfg)?;
        n_evals += left.n_evals + right.n_evals;
        abs_err += left.abs_err + right.abs_err;
        converged &= left.converged && right.converged;
        Ok(left.value + right.value)
    };

    let v0 = excised(eps)?;
    let v1 = excised(0.5 * eps)?;
    let v2 = excised(0.25 * eps)?;

    // cancel the e term, then the e^3 term
    let r1 = 2.0 * v1 - v0;
    let r1h = 2.0 * v2 - v1;
    let r2 = (8.0 * r1h - r1) / 7.0;

    Ok(QuadratureResult {
        value: r2,
        abs_err: abs_err + (r2 - r1h).norm(),
        n_evals,
        converged,
    })
}
