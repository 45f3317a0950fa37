//! Contours in the complex momentum plane. The deformed path runs along the
//! real axis from -a to a and steps around the real pole at k0 on a
//! semicircular arc of radius eps, above the axis by default.

use alloc::vec::Vec;

use super::gk::{integrate, QuadConfig, QuadratureResult};
use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

/// One piece of a contour, parametrized over t in [0, 1].
#[derive(Clone, Copy, Debug)]
pub enum PathSegment {
    Line {
        from: C64,
        to: C64,
    },
    Arc {
        center: C64,
        radius: f64,
        from_angle: f64,
        to_angle: f64,
    },
}

impl PathSegment {
    pub fn point(&self, t: f64) -> C64 {
        match *self {
            PathSegment::Line { from, to } => from + t * (to - from),
            PathSegment::Arc {
                center,
                radius,
                from_angle,
                to_angle,
            } => {
                let ang = from_angle + t * (to_angle - from_angle);
                center + C64::from_polar(radius, ang)
            }
        }
    }

    /// dz/dt at parameter t.
    pub fn tangent(&self, t: f64) -> C64 {
        match *self {
            PathSegment::Line { from, to } => to - from,
            PathSegment::Arc {
                center: _,
                radius,
                from_angle,
                to_angle,
            } => {
                let ang = from_angle + t * (to_angle - from_angle);
                C64::i() * (to_angle - from_angle) * C64::from_polar(radius, ang)
            }
        }
    }
}

/// Truncated contour avoiding a simple pole at `k0` on the real axis.
///
/// The excision half-width must satisfy `eps < min(|k0|, a - |k0|) / 2` so
/// the arc stays clear of both the origin and the endpoints.
#[derive(Clone, Copy, Debug)]
pub struct ContourSpec {
    pub a: f64,
    pub k0: f64,
    pub eps: f64,
    pub below_axis: bool,
}

impl ContourSpec {
    pub fn new(a: f64, k0: f64, eps: f64) -> Result<Self> {
        Self::build(a, k0, eps, false)
    }

    /// Same geometry with the arc dipping below the real axis instead.
    pub fn new_below(a: f64, k0: f64, eps: f64) -> Result<Self> {
        Self::build(a, k0, eps, true)
    }

    fn build(a: f64, k0: f64, eps: f64, below_axis: bool) -> Result<Self> {
        if !a.is_finite() || !k0.is_finite() || !eps.is_finite() {
            return Err(Error::Parameter("contour: non-finite parameter"));
        }
        if a <= 0.0 {
            return Err(Error::Parameter("contour: truncation a must be positive"));
        }
        if k0 == 0.0 {
            return Err(Error::Parameter(
                "contour: pole position k0 must be nonzero",
            ));
        }
        if a <= k0.abs() {
            return Err(Error::Parameter("contour: pole lies outside (-a, a)"));
        }
        if eps <= 0.0 || eps >= 0.5 * k0.abs().min(a - k0.abs()) {
            return Err(Error::Parameter(
                "contour: need 0 < eps < min(|k0|, a - |k0|) / 2",
            ));
        }
        Ok(Self {
            a,
            k0,
            eps,
            below_axis,
        })
    }

    /// The segments making up the contour, in traversal order. Straight
    /// pieces are split at k = 0 so that no quadrature panel ever straddles
    /// the origin (integrands built from scattering states can be singular
    /// or need series fallback there, and panel midpoints land on interval
    /// centers).
    pub fn segments(&self) -> Vec<PathSegment> {
        let mut segs = Vec::with_capacity(4);
        let push_line = |segs: &mut Vec<PathSegment>, x0: f64, x1: f64| {
            if x0 < 0.0 && 0.0 < x1 {
                segs.push(PathSegment::Line {
                    from: C64::new(x0, 0.0),
                    to: C64::new(0.0, 0.0),
                });
                segs.push(PathSegment::Line {
                    from: C64::new(0.0, 0.0),
                    to: C64::new(x1, 0.0),
                });
            } else {
                segs.push(PathSegment::Line {
                    from: C64::new(x0, 0.0),
                    to: C64::new(x1, 0.0),
                });
            }
        };
        push_line(&mut segs, -self.a, self.k0 - self.eps);
        let (from_angle, to_angle) = if self.below_axis {
            (core::f64::consts::PI, 2.0 * core::f64::consts::PI)
        } else {
            (core::f64::consts::PI, 0.0)
        };
        segs.push(PathSegment::Arc {
            center: C64::new(self.k0, 0.0),
            radius: self.eps,
            from_angle,
            to_angle,
        });
        push_line(&mut segs, self.k0 + self.eps, self.a);
        segs
    }
}

/// Integrate f(z) dz along one segment.
pub fn integrate_segment(
    mut f: impl FnMut(C64) -> C64,
    seg: &PathSegment,
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    integrate(|t| f(seg.point(t)) * seg.tangent(t), 0.0, 1.0, cfg)
}

/// Integrate f(z) dz along the whole contour.
pub fn integrate_contour(
    mut f: impl FnMut(C64) -> C64,
    spec: &ContourSpec,
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    accumulate(&mut f, &spec.segments(), cfg)
}

/// Integrate f(z) dz over the straight pieces only, skipping the arc. This
/// is the excised-lines part [-a, k0-eps] + [k0+eps, a] of the contour.
pub fn integrate_lines(
    mut f: impl FnMut(C64) -> C64,
    spec: &ContourSpec,
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    let segs: Vec<PathSegment> = spec
        .segments()
        .into_iter()
        .filter(|s| matches!(s, PathSegment::Line { .. }))
        .collect();
    accumulate(&mut f, &segs, cfg)
}

/// Integrate f(z) dz over the semicircular detour only.
pub fn integrate_arc(
    mut f: impl FnMut(C64) -> C64,
    spec: &ContourSpec,
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    let segs: Vec<PathSegment> = spec
        .segments()
        .into_iter()
        .filter(|s| matches!(s, PathSegment::Arc { .. }))
        .collect();
    accumulate(&mut f, &segs, cfg)
}

fn accumulate(
    f: &mut impl FnMut(C64) -> C64,
    segs: &[PathSegment],
    cfg: QuadConfig,
) -> Result<QuadratureResult> {
    let mut value = C64::new(0.0, 0.0);
    let mut abs_err = 0.0;
    let mut n_evals = 0;
    let mut converged = true;
    for seg in segs {
        let r = integrate_segment(&mut *f, seg, cfg)?;
        value += r.value;
        abs_err += r.abs_err;
        n_evals += r.n_evals;
        converged &= r.converged;
    }
    Ok(QuadratureResult {
        value,
        abs_err,
        n_evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn constant_integrates_to_endpoint_difference() {
        // the arc detour must not change the integral of an entire function
        let spec = ContourSpec::new(7.0, -1.0, 0.25).unwrap();
        let r = integrate_contour(|_| C64::new(1.0, 0.0), &spec, QuadConfig::default()).unwrap();
        assert!((r.value - C64::new(14.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn entire_integrand_is_path_independent() {
        let spec = ContourSpec::new(3.0, 1.2, 0.3).unwrap();
        let r = integrate_contour(|k| (C64::i() * k * 0.7).exp(), &spec, QuadConfig::default())
            .unwrap();
        let straight = super::super::gk::integrate(
            |k| (C64::new(0.0, k * 0.7)).exp(),
            -3.0,
            3.0,
            QuadConfig::default(),
        )
        .unwrap();
        assert!((r.value - straight.value).norm() < 1e-11);
    }

    #[test]
    fn arc_over_simple_pole_gives_minus_i_pi() {
        // upper semicircle, traversed left to right, contributes -i pi times
        // the residue; the straight pieces cancel by symmetry for 1/(k-k0)
        let spec = ContourSpec::new(5.0, 1.0, 0.1).unwrap();
        let k0 = C64::new(1.0, 0.0);
        let segs = spec.segments();
        let arc = segs
            .iter()
            .find(|s| matches!(s, PathSegment::Arc { .. }))
            .unwrap();
        let r = integrate_segment(|k| 1.0 / (k - k0), arc, QuadConfig::default()).unwrap();
        assert!((r.value - C64::new(0.0, -PI)).norm() < 1e-12);
    }

    #[test]
    fn below_axis_arc_gives_plus_i_pi() {
        let spec = ContourSpec::new_below(5.0, 1.0, 0.1).unwrap();
        let k0 = C64::new(1.0, 0.0);
        let segs = spec.segments();
        let arc = segs
            .iter()
            .find(|s| matches!(s, PathSegment::Arc { .. }))
            .unwrap();
        let r = integrate_segment(|k| 1.0 / (k - k0), arc, QuadConfig::default()).unwrap();
        assert!((r.value - C64::new(0.0, PI)).norm() < 1e-12);
    }

    #[test]
    fn contour_value_is_independent_of_eps() {
        // Cauchy's theorem: any admissible excision radius gives the same
        // integral for a function analytic off the pole
        let f = |k: C64| (C64::i() * k * 1.4).exp() / (k - 1.0);
        let r1 = integrate_contour(
            f,
            &ContourSpec::new(6.0, 1.0, 0.05).unwrap(),
            QuadConfig::default(),
        )
        .unwrap();
        let r2 = integrate_contour(
            f,
            &ContourSpec::new(6.0, 1.0, 0.4).unwrap(),
            QuadConfig::default(),
        )
        .unwrap();
        assert!((r1.value - r2.value).norm() < 1e-10);
    }

    #[test]
    fn lines_split_at_origin() {
        let spec = ContourSpec::new(5.0, 1.0, 0.1).unwrap();
        let segs = spec.segments();
        // left line crosses zero and must be split: 2 lines + arc + 1 line
        assert_eq!(segs.len(), 4);
        let crossings: usize = segs
            .iter()
            .filter(|s| match s {
                PathSegment::Line { from, to } => from.re < 0.0 && to.re > 0.0,
                _ => false,
            })
            .count();
        assert_eq!(crossings, 0);
    }

    #[test]
    fn contour_splits_into_lines_plus_arc() {
        let f = |k: C64| (C64::i() * k * 0.9).exp() / (k - 0.8);
        let spec = ContourSpec::new(6.0, 0.8, 0.2).unwrap();
        let whole = integrate_contour(f, &spec, QuadConfig::default()).unwrap();
        let lines = integrate_lines(f, &spec, QuadConfig::default()).unwrap();
        let arc = integrate_arc(f, &spec, QuadConfig::default()).unwrap();
        assert!((whole.value - lines.value - arc.value).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(ContourSpec::new(1.0, 2.0, 0.1).is_err()); // pole outside
        assert!(ContourSpec::new(5.0, 0.0, 0.1).is_err()); // pole at origin
        assert!(ContourSpec::new(5.0, 1.0, 0.6).is_err()); // eps too large vs |k0|
        assert!(ContourSpec::new(1.1, 1.0, 0.09).is_err()); // eps too large vs a-|k0|
        assert!(ContourSpec::new(5.0, 1.0, -0.1).is_err());
        assert!(ContourSpec::new(5.0, 1.0, 0.05).is_ok());
    }

    #[test]
    fn segment_parametrization_endpoints() {
        let spec = ContourSpec::new(4.0, -1.0, 0.2).unwrap();
        let segs = spec.segments();
        for pair in segs.windows(2) {
            // consecutive segments join up
            assert!((pair[0].point(1.0) - pair[1].point(0.0)).norm() < 1e-14);
        }
        assert!((segs[0].point(0.0) - C64::new(-4.0, 0.0)).norm() < 1e-14);
        assert!((segs[segs.len() - 1].point(1.0) - C64::new(4.0, 0.0)).norm() < 1e-14);
    }
}
