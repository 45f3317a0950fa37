//! Closed forms for the pole integrals that dominate kernel evaluation.
//!
//! Everything here reduces the integral of e^{ikr} / (k - k0) over a
//! truncated real interval, with the pole handled by an arc, an excision,
//! or a principal value, to Si/Ci evaluations. The tests pin each form
//! against direct contour quadrature, which is the slow route these exist
//! to replace.

use super::super::special::{cos_integral, sin_integral};
use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

fn check_geometry(r: f64, k0: f64, a: f64) -> Result<()> {
    if !r.is_finite() || !k0.is_finite() || !a.is_finite() {
        return Err(Error::Parameter("pole kernel: non-finite parameter"));
    }
    if r < 0.0 {
        return Err(Error::Parameter("pole kernel: r must be non-negative"));
    }
    if a <= k0.abs() {
        return Err(Error::Parameter("pole kernel: need a > |k0|"));
    }
    Ok(())
}

/// Integral of e^{ikr} / (k - k0) from -a to a along the contour that
/// passes the pole on an upper semicircle. By analyticity the value does
/// not depend on the excision radius.
pub fn cauchy_kernel_integral(r: f64, k0: f64, a: f64) -> Result<C64> {
    check_geometry(r, k0, a)?;
    if r == 0.0 {
        return Ok(C64::new(((a - k0) / (a + k0)).ln(), -core::f64::consts::PI));
    }
    let ci_m = cos_integral((a - k0) * r)?;
    let ci_p = cos_integral((a + k0) * r)?;
    let si_m = sin_integral((a - k0) * r)?;
    let si_p = sin_integral((a + k0) * r)?;
    let half_pi = 0.5 * core::f64::consts::PI;
    let bracket = C64::new(ci_m - ci_p, -(half_pi - si_p) - (half_pi - si_m));
    Ok(C64::from_polar(1.0, k0 * r) * bracket)
}

/// Principal value of the same integral along the straight interval.
pub fn principal_value_kernel(r: f64, k0: f64, a: f64) -> Result<C64> {
    let ck = cauchy_kernel_integral(r, k0, a)?;
    Ok(ck + C64::i() * core::f64::consts::PI * C64::from_polar(1.0, k0 * r))
}

/// The two straight pieces only, with the symmetric window
/// (k0 - eps, k0 + eps) removed.
pub fn excised_lines_kernel(r: f64, k0: f64, a: f64, eps: f64) -> Result<C64> {
    check_geometry(r, k0, a)?;
    if eps <= 0.0 || eps >= a - k0.abs() {
        return Err(Error::Parameter("pole kernel: need 0 < eps < a - |k0|"));
    }
    let ck = cauchy_kernel_integral(r, k0, a)?;
    let si = sin_integral(eps * r)?;
    let phase = C64::from_polar(1.0, k0 * r);
    Ok(ck + phase * C64::new(0.0, core::f64::consts::PI - 2.0 * si))
}

/// Principal value over the window (k0 - eps, k0 + eps) alone.
pub fn pole_window_integral(r: f64, k0: f64, eps: f64) -> Result<C64> {
    if r < 0.0 || eps <= 0.0 {
        return Err(Error::Parameter("pole window: need r >= 0 and eps > 0"));
    }
    let si = sin_integral(eps * r)?;
    Ok(C64::from_polar(1.0, k0 * r) * C64::new(0.0, 2.0 * si))
}

/// Integral of sin(kx) sin(kx') / k over the window (k0 - eps, k0 + eps),
/// which must not contain the origin. Real by inspection.
pub fn sinsin_window(x: f64, xp: f64, k0: f64, eps: f64) -> Result<f64> {
    if k0 == 0.0 || eps <= 0.0 || eps >= k0.abs() {
        return Err(Error::Parameter("sinsin window: need 0 < eps < |k0|"));
    }
    // product to sum: sin a sin b = (cos(a-b) - cos(a+b)) / 2, then each
    // cosine term integrates to a Ci difference
    let f = |y: f64| -> Result<f64> {
        let s = if k0 > 0.0 { 1.0 } else { -1.0 };
        if y == 0.0 {
            return Ok(s * ((k0.abs() + eps) / (k0.abs() - eps)).ln());
        }
        Ok(s * (cos_integral((k0.abs() + eps) * y.abs())?
            - cos_integral((k0.abs() - eps) * y.abs())?))
    };
    Ok(0.5 * (f(x - xp)? - f(x + xp)?))
}
