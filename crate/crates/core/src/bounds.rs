//! Certified inequalities for the pole and window integrals: the explicit
//! error bounds that justify truncating the momentum integrals and shrinking
//! the excision window. Constants are fitted numerically on refinable grids
//! and carry a safety factor, so every check is a falsifiable certificate
//! rather than an equality.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::{cauchy_kernel_integral, integrate, QuadConfig};
use crate::special::sin_integral;
use crate::{Error, Result, C64};

use core::f64::consts::{FRAC_PI_2, PI};

/// Constants entering the closed bounds.
///
/// `c` is twice the supremum of |(1 + 1/xi) sin xi| over xi > 0; the pole
/// bound uses `d_pole = c + 2c^2`, the window bounds use `d_window = 4c`,
/// and `k_si` bounds the sine integral via |Si(r)| <= k_si r/(1+r).
#[derive(Clone, Copy, Debug)]
pub struct BoundConstants {
    pub c: f64,
    pub d_pole: f64,
    pub d_window: f64,
    pub k_si: f64,
}

impl BoundConstants {
    pub fn compute() -> Result<Self> {
        Self::compute_with_resolution(20_000)
    }

    /// Fit the constants on grids of `n` points. Nested grids (doubling n)
    /// can only raise the fitted values, which the tests exploit.
    pub fn compute_with_resolution(n: usize) -> Result<Self> {
        if n < 64 {
            return Err(Error::Parameter("bound constants: grid too coarse"));
        }
        // |(1+1/xi) sin xi| -> 1 as xi -> 0 and is <= 1 + 1/(4pi) < 1.1
        // beyond 4pi, so the supremum lives on (0, 4pi]
        let mut half_c = 0.0_f64;
        for i in 1..=n {
            let xi = 4.0 * PI * i as f64 / n as f64;
            half_c = half_c.max((1.0 + 1.0 / xi) * xi.sin().abs());
        }
        let c = 2.0 * half_c;

        // Si(r)(1+r)/r -> 1 at 0 and pi/2 at infinity, peaking on the first
        // lobe; 2% headroom turns the grid maximum into a usable certificate
        let mut s = FRAC_PI_2;
        for i in 1..=n {
            let r = 8.0 * i as f64 / n as f64;
            s = s.max(sin_integral(r)? * (1.0 + r) / r);
        }
        let k_si = 1.02 * s;

        Ok(Self {
            c,
            d_pole: c + 2.0 * c * c,
            d_window: 4.0 * c,
            k_si,
        })
    }
}

/// One inequality instance: holds when lhs <= rhs.
#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    /// Fraction of the bound left unused; certificates want this positive.
    pub fn margin(&self) -> f64 {
        if self.rhs > 0.0 {
            (self.rhs - self.lhs) / self.rhs
        } else if self.lhs == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }
}

fn window_cfg(freq: f64, len: f64) -> QuadConfig {
    let mut cfg = QuadConfig::default();
    let need = (0.7 * freq.abs() * len.abs()) as usize + 64;
    if cfg.max_panels < need {
        cfg.max_panels = need;
    }
    cfg
}

/// Size and tail bounds for the truncated pole integral over the deformed
/// path. Returns [size, tail]: the size bound
/// |CK| <= a d_pole / ((1 + r(a-|k0|))(a-|k0|)), and the tail bound
/// |CK - boundary terms| <= 4/((a-|k0|)^2 r^2) with the two integration-by-
/// parts boundary terms removed.
pub fn pole_integral_bounds(
    r: f64,
    k0: f64,
    a: f64,
    consts: &BoundConstants,
) -> Result<[BoundCheck; 2]> {
    if !(r > 0.0) || !(a > k0.abs()) || !a.is_finite() {
        return Err(Error::Parameter("pole bounds: need r > 0 and a > |k0|"));
    }
    let gap = a - k0.abs();
    let ck = cauchy_kernel_integral(r, k0, a)?;
    let size = BoundCheck {
        lhs: ck.norm(),
        rhs: a * consts.d_pole / ((1.0 + r * gap) * gap),
    };
    let lead = (C64::from_polar(1.0, a * r) / (a - k0) + C64::from_polar(1.0, -a * r) / (a + k0))
        / (C64::i() * r);
    let tail = BoundCheck {
        lhs: (ck - lead).norm(),
        rhs: 4.0 / (gap * gap * r * r),
    };
    Ok([size, tail])
}

/// Window bound for the plane-wave numerator:
/// |int_{k0-eps}^{k0+eps} e^{iky}/k dk| <= eps d_window/((|k0|-eps)(2+eps|y|)).
/// The left side is integrated adaptively, independent of the closed forms
/// used elsewhere.
pub fn window_integral_bound(
    y: f64,
    eps: f64,
    k0: f64,
    consts: &BoundConstants,
) -> Result<BoundCheck> {
    if !(eps > 0.0) || eps >= k0.abs() {
        return Err(Error::Parameter("window bound: need 0 < eps < |k0|"));
    }
    let v = integrate(
        |k| C64::from_polar(1.0, k * y) * (1.0 / k),
        k0 - eps,
        k0 + eps,
        window_cfg(y, 2.0 * eps),
    )?;
    Ok(BoundCheck {
        lhs: v.value.norm(),
        rhs: eps * consts.d_window / ((k0.abs() - eps) * (2.0 + eps * y.abs())),
    })
}

/// Corner variant of the window bound, with the product of sines in the
/// numerator and the separation ||x|-|x'|| playing the role of |y|.
pub fn sin_sin_window_bound(
    x: f64,
    xp: f64,
    eps: f64,
    k0: f64,
    consts: &BoundConstants,
) -> Result<BoundCheck> {
    if !(eps > 0.0) || eps >= k0.abs() {
        return Err(Error::Parameter("window bound: need 0 < eps < |k0|"));
    }
    let v = integrate(
        |k| C64::new((k * x).sin() * (k * xp).sin() / k, 0.0),
        k0 - eps,
        k0 + eps,
        window_cfg(x.abs() + xp.abs(), 2.0 * eps),
    )?;
    let y = (x.abs() - xp.abs()).abs();
    Ok(BoundCheck {
        lhs: v.value.norm(),
        rhs: eps * consts.d_window / ((k0.abs() - eps) * (2.0 + eps * y)),
    })
}

/// Shifted variant: the window rides at twice the pole momentum, so the
/// denominator gap becomes 2|k0| - eps.
pub fn shifted_window_bound(
    y: f64,
    eps: f64,
    k0: f64,
    consts: &BoundConstants,
) -> Result<BoundCheck> {
    if !(eps > 0.0) || eps >= 2.0 * k0.abs() {
        return Err(Error::Parameter("window bound: need 0 < eps < 2|k0|"));
    }
    let v = integrate(
        |t| C64::from_polar(1.0, t * y) * (1.0 / t),
        2.0 * k0 - eps,
        2.0 * k0 + eps,
        window_cfg(y, 2.0 * eps),
    )?;
    Ok(BoundCheck {
        lhs: v.value.norm(),
        rhs: eps * consts.d_window / ((2.0 * k0.abs() - eps) * (2.0 + eps * y.abs())),
    })
}

/// Growth bound for the sine integral: |Si(r)| <= k_si r/(1+r).
pub fn si_growth_bound(r: f64, consts: &BoundConstants) -> Result<BoundCheck> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Parameter("si bound: need finite r >= 0"));
    }
    Ok(BoundCheck {
        lhs: sin_integral(r)?.abs(),
        rhs: consts.k_si * r / (1.0 + r),
    })
}

/// Log-spaced grid helper for the certificate sweeps.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(n);
    if n == 1 {
        g.push(lo);
        return g;
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    for i in 0..n {
        g.push(lo * (ratio * i as f64).exp());
    }
    g
}
