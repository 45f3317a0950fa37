//! Test functions the resolutions are applied to, graded by the weighted
//! L2 classes they belong to: a function sits in the class of weight
//! exponent gamma when the integral of |f(x)|^2 (1+|x|)^gamma converges.
//! Membership is decided analytically from decay exponents; each family
//! also knows how an x-integration should truncate it.

use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

/// Smooth switch rising from identically 0 below `lo` to identically 1
/// above `hi`, built from the standard exp(-1/t) glue so every derivative
/// vanishes at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffEta {
    lo: f64,
    hi: f64,
}

impl Default for CutoffEta {
    /// Unit transition window between 1 and 2, the convention the
    /// slow-increase family assumes.
    fn default() -> Self {
        Self { lo: 1.0, hi: 2.0 }
    }
}

impl CutoffEta {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::Parameter("cutoff: need finite lo < hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn eta(&self, x: f64) -> f64 {
        let t = (x - self.lo) / (self.hi - self.lo);
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            let a = (-1.0 / t).exp();
            let b = (-1.0 / (1.0 - t)).exp();
            a / (a + b)
        }
    }
}

/// How much of the real line an x-integration against the function must
/// actually cover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SupportHint {
    /// Identically zero outside [-radius, radius].
    Compact { radius: f64 },
    /// Below 1e-18 in modulus outside [-radius, radius].
    EffectivelyCompact { radius: f64 },
    /// No usable truncation radius; integrals against oscillatory kernels
    /// need explicit tail summation.
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFamily {
    /// exp(-(x-center)^2 / (2 sigma^2)), unit peak.
    Gaussian { sigma: f64, center: f64 },
    /// Smooth compactly supported bump on [-support, support], unit peak.
    Bump { support: f64 },
    /// (1 + |x|)^{-p}; a kink at the origin is fine, the classes only ask
    /// for continuity there.
    PowerDecay { p: f64 },
    /// eta(x) e^{i k0 x} |x|^kappa on one half line (eta(-x) mirrors it to
    /// the other); grows without bound, so it sits in no class with weight
    /// exponent above -1 - 2 kappa.
    SlowIncrease {
        positive_side: bool,
        k0: f64,
        kappa: f64,
    },
    /// exp((z - alpha)|x|/2): the singular state damped by alpha; alpha = 0
    /// is the undamped state itself, of unit modulus everywhere.
    SmoothedPsiZero { z: C64, alpha: f64 },
    /// exp(i k0 x - x^2/(2 width^2)).
    PlaneWavePacket { k0: f64, width: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    family: TestFamily,
    claimed_gamma: Option<f64>,
}

fn family_valid(family: &TestFamily) -> Result<()> {
    match *family {
        TestFamily::Gaussian { sigma, center } => {
            if !(sigma.is_finite() && sigma > 0.0) || !center.is_finite() {
                return Err(Error::Parameter("gaussian: need sigma > 0, finite center"));
            }
        }
        TestFamily::Bump { support } => {
            if !(support.is_finite() && support > 0.0) {
                return Err(Error::Parameter("bump: need positive support"));
            }
        }
        TestFamily::PowerDecay { p } => {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::Parameter("power decay: need p >= 0"));
            }
        }
        TestFamily::SlowIncrease { k0, kappa, .. } => {
            if !k0.is_finite() || !(0.0..1.0).contains(&kappa) {
                return Err(Error::Parameter(
                    "slow increase: need finite k0 and kappa in [0,1)",
                ));
            }
        }
        TestFamily::SmoothedPsiZero { z, alpha } => {
            if !z.re.is_finite() || !z.im.is_finite() || !alpha.is_finite() || alpha < 0.0 {
                return Err(Error::Parameter(
                    "smoothed state: need finite z, alpha >= 0",
                ));
            }
            if 0.5 * z.re - 0.5 * alpha > 0.0 {
                return Err(Error::Parameter(
                    "smoothed state: Re(z - alpha) must not be positive",
                ));
            }
        }
        TestFamily::PlaneWavePacket { k0, width } => {
            if !k0.is_finite() || !(width.is_finite() && width > 0.0) {
                return Err(Error::Parameter("packet: need finite k0, width > 0"));
            }
        }
    }
    Ok(())
}

/// Supremum of weight exponents whose class contains the family; membership
/// is the open condition gamma < sup.
fn gamma_supremum(family: &TestFamily) -> f64 {
    match *family {
        TestFamily::Gaussian { .. } | TestFamily::Bump { .. } => f64::INFINITY,
        TestFamily::PlaneWavePacket { .. } => f64::INFINITY,
        // |f|^2 (1+|x|)^gamma ~ (1+|x|)^{gamma - 2p}
        TestFamily::PowerDecay { p } => 2.0 * p - 1.0,
        // |f|^2 ~ |x|^{2 kappa}
        TestFamily::SlowIncrease { kappa, .. } => -1.0 - 2.0 * kappa,
        // |f|^2 = e^{Re(z - alpha)|x|}
        TestFamily::SmoothedPsiZero { z, alpha } => {
            if z.re - alpha < 0.0 {
                f64::INFINITY
            } else {
                -1.0
            }
        }
    }
}

impl TestFunction {
    pub fn new(family: TestFamily) -> Result<Self> {
        family_valid(&family)?;
        Ok(Self {
            family,
            claimed_gamma: None,
        })
    }

    /// Attach the weight exponent downstream class gates should assume; it
    /// must be one the function actually belongs to.
    pub fn with_claimed_gamma(family: TestFamily, gamma: f64) -> Result<Self> {
        family_valid(&family)?;
        if !gamma.is_finite() || gamma >= gamma_supremum(&family) {
            return Err(Error::ClassViolation(
                "claimed weight exponent exceeds the family's decay",
            ));
        }
        Ok(Self {
            family,
            claimed_gamma: Some(gamma),
        })
    }

    pub fn family(&self) -> TestFamily {
        self.family
    }

    pub fn claimed_gamma(&self) -> Option<f64> {
        self.claimed_gamma
    }

    pub fn evaluate(&self, x: f64) -> C64 {
        match self.family {
            TestFamily::Gaussian { sigma, center } => {
                let u = (x - center) / sigma;
                C64::new((-0.5 * u * u).exp(), 0.0)
            }
            TestFamily::Bump { support } => {
                let u = x / support;
                if u.abs() < 1.0 {
                    C64::new((1.0 - 1.0 / (1.0 - u * u)).exp(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            TestFamily::PowerDecay { p } => C64::new((1.0 + x.abs()).powf(-p), 0.0),
            TestFamily::SlowIncrease {
                positive_side,
                k0,
                kappa,
            } => {
                let gate = CutoffEta::default().eta(if positive_side { x } else { -x });
                if gate == 0.0 {
                    return C64::new(0.0, 0.0);
                }
                gate * x.abs().powf(kappa) * C64::from_polar(1.0, k0 * x)
            }
            TestFamily::SmoothedPsiZero { z, alpha } => (0.5 * (z - alpha) * x.abs()).exp(),
            TestFamily::PlaneWavePacket { k0, width } => {
                let u = x / width;
                (C64::new(0.0, k0 * x) - 0.5 * u * u).exp()
            }
        }
    }

    /// True when the weighted square integral with (1+|x|)^gamma converges.
    pub fn in_weighted_class(&self, gamma: f64) -> bool {
        gamma < gamma_supremum(&self.family)
    }

    /// Supremum of weight exponents whose class contains the function;
    /// membership itself is the open condition gamma < sup.
    pub fn gamma_supremum(&self) -> f64 {
        gamma_supremum(&self.family)
    }

    pub fn support_hint(&self) -> SupportHint {
        // 9.2 sigma puts a unit gaussian below 1e-18
        match self.family {
            TestFamily::Gaussian { sigma, center } => SupportHint::EffectivelyCompact {
                radius: center.abs() + 9.2 * sigma,
            },
            TestFamily::Bump { support } => SupportHint::Compact { radius: support },
            TestFamily::PowerDecay { .. } | TestFamily::SlowIncrease { .. } => {
                SupportHint::Extended
            }
            TestFamily::SmoothedPsiZero { z, alpha } => {
                let rate = 0.5 * (alpha - z.re);
                if rate > 0.0 {
                    SupportHint::EffectivelyCompact {
                        radius: 41.5 / rate,
                    }
                } else {
                    SupportHint::Extended
                }
            }
            TestFamily::PlaneWavePacket { width, .. } => SupportHint::EffectivelyCompact {
                radius: 9.2 * width,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian() -> TestFunction {
        TestFunction::new(TestFamily::Gaussian {
            sigma: 1.0,
            center: 0.0,
        })
        .unwrap()
    }

    #[test]
    fn validates_parameters() {
        assert!(TestFunction::new(TestFamily::Gaussian {
            sigma: 0.0,
            center: 0.0
        })
        .is_err());
        assert!(TestFunction::new(TestFamily::Bump { support: -1.0 }).is_err());
        assert!(TestFunction::new(TestFamily::PowerDecay { p: -0.5 }).is_err());
        assert!(TestFunction::new(TestFamily::SlowIncrease {
            positive_side: true,
            k0: 0.7,
            kappa: 1.0,
        })
        .is_err());
        assert!(TestFunction::new(TestFamily::SmoothedPsiZero {
            z: C64::new(1.0, 0.0),
            alpha: 0.5,
        })
        .is_err());
        assert!(TestFunction::new(TestFamily::PlaneWavePacket {
            k0: 1.0,
            width: 0.0
        })
        .is_err());

        // a claimed weight exponent must be one the family satisfies
        assert!(TestFunction::with_claimed_gamma(TestFamily::PowerDecay { p: 1.0 }, 0.99).is_ok());
        assert!(matches!(
            TestFunction::with_claimed_gamma(TestFamily::PowerDecay { p: 1.0 }, 1.0),
            Err(Error::ClassViolation(_))
        ));
    }

    #[test]
    fn cutoff_is_a_smooth_step() {
        let eta = CutoffEta::default();
        assert_eq!(eta.eta(0.5), 0.0);
        assert_eq!(eta.eta(1.0), 0.0);
        assert_eq!(eta.eta(2.0), 1.0);
        assert_eq!(eta.eta(3.0), 1.0);
        assert!((eta.eta(1.5) - 0.5).abs() < 1e-15);

        let h = 1e-6;
        let slope = (eta.eta(1.5 + h) - eta.eta(1.5 - h)) / (2.0 * h);
        assert!(slope > 0.0);

        let mut last = 0.0;
        for i in 0..=100 {
            let v = eta.eta(1.0 + 0.01 * i as f64);
            assert!(v >= last && (0.0..=1.0).contains(&v));
            last = v;
        }

        // the glue construction keeps the ends flat to all orders
        assert!(eta.eta(1.0 + 1e-3) < 1e-300);
        assert!(1.0 - eta.eta(2.0 - 1e-3) < 1e-300);

        assert!(CutoffEta::new(2.0, 1.0).is_err());
    }

    #[test]
    fn evaluates_documented_points() {
        assert_eq!(gaussian().evaluate(0.0), C64::new(1.0, 0.0));

        let slow = TestFunction::new(TestFamily::SlowIncrease {
            positive_side: true,
            k0: 0.7,
            kappa: 0.5,
        })
        .unwrap();
        let want = 2.0 * C64::from_polar(1.0, 2.8);
        assert!((slow.evaluate(4.0) - want).norm() < 1e-14);
        assert_eq!(slow.evaluate(-4.0), C64::new(0.0, 0.0));
        assert_eq!(slow.evaluate(0.5), C64::new(0.0, 0.0));

        let smoothed = TestFunction::new(TestFamily::SmoothedPsiZero {
            z: C64::new(0.0, 2.0),
            alpha: 0.5,
        })
        .unwrap();
        let want = C64::new((-0.25_f64).exp(), 0.0) * C64::from_polar(1.0, 1.0);
        assert!((smoothed.evaluate(1.0) - want).norm() < 1e-15);
        assert!((smoothed.evaluate(-1.0) - want).norm() < 1e-15);

        let bump = TestFunction::new(TestFamily::Bump { support: 2.0 }).unwrap();
        assert_eq!(bump.evaluate(0.0), C64::new(1.0, 0.0));
        assert_eq!(bump.evaluate(2.0), C64::new(0.0, 0.0));
        assert_eq!(bump.evaluate(-2.5), C64::new(0.0, 0.0));

        let power = TestFunction::new(TestFamily::PowerDecay { p: 1.5 }).unwrap();
        assert!((power.evaluate(3.0).re - 0.125).abs() < 1e-15);
    }

    #[test]
    fn continuous_across_the_origin() {
        let cases = [
            TestFamily::Gaussian {
                sigma: 0.7,
                center: 1.0,
            },
            TestFamily::Bump { support: 2.0 },
            TestFamily::PowerDecay { p: 1.2 },
            TestFamily::SlowIncrease {
                positive_side: false,
                k0: 0.7,
                kappa: 0.3,
            },
            TestFamily::SmoothedPsiZero {
                z: C64::new(0.0, 2.0),
                alpha: 0.0,
            },
            TestFamily::PlaneWavePacket {
                k0: 1.3,
                width: 0.8,
            },
        ];
        for family in cases {
            let f = TestFunction::new(family).unwrap();
            let mid = f.evaluate(0.0);
            for x in [-1e-9, 1e-9] {
                assert!(
                    (f.evaluate(x) - mid).norm() < 1e-8,
                    "jump at origin for {family:?}"
                );
            }
        }
    }

    #[test]
    fn membership_follows_decay_exponents() {
        for gamma in [-5.0, 0.0, 7.0] {
            assert!(gaussian().in_weighted_class(gamma));
            let bump = TestFunction::new(TestFamily::Bump { support: 1.0 }).unwrap();
            assert!(bump.in_weighted_class(gamma));
            let packet = TestFunction::new(TestFamily::PlaneWavePacket {
                k0: 0.7,
                width: 1.0,
            })
            .unwrap();
            assert!(packet.in_weighted_class(gamma));
        }

        let slow = TestFunction::new(TestFamily::SlowIncrease {
            positive_side: true,
            k0: 0.7,
            kappa: 0.5,
        })
        .unwrap();
        assert!(slow.in_weighted_class(-2.01));
        assert!(!slow.in_weighted_class(-2.0));
        assert!(!slow.in_weighted_class(0.0));

        let undamped = TestFunction::new(TestFamily::SmoothedPsiZero {
            z: C64::new(0.0, 2.0),
            alpha: 0.0,
        })
        .unwrap();
        assert!(undamped.in_weighted_class(-1.01));
        assert!(!undamped.in_weighted_class(-1.0));
        assert!(!undamped.in_weighted_class(-0.5));

        let power = TestFunction::new(TestFamily::PowerDecay { p: 1.0 }).unwrap();
        assert!(power.in_weighted_class(0.99));
        assert!(!power.in_weighted_class(1.0));
    }

    proptest! {
        // the classes are nested downward in the weight exponent
        #[test]
        fn membership_is_monotone(idx in 0usize..6, g1 in -6.0f64..6.0, g2 in -6.0f64..6.0) {
            let families = [
                TestFamily::Gaussian { sigma: 1.0, center: 0.0 },
                TestFamily::Bump { support: 1.5 },
                TestFamily::PowerDecay { p: 0.8 },
                TestFamily::SlowIncrease { positive_side: true, k0: 0.7, kappa: 0.4 },
                TestFamily::SmoothedPsiZero { z: C64::new(0.0, 2.0), alpha: 0.0 },
                TestFamily::PlaneWavePacket { k0: 1.0, width: 0.6 },
            ];
            let f = TestFunction::new(families[idx]).unwrap();
            let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
            if f.in_weighted_class(hi) {
                prop_assert!(f.in_weighted_class(lo));
            }
        }
    }

    // the analytic exponent rule is authoritative; this guards it with
    // truncated quadrature, declaring convergence when increments between
    // X = 1e2, 1e3, 1e4 shrink geometrically
    #[test]
    fn membership_matches_truncated_integrals() {
        use crate::quadrature::{integrate, QuadConfig};

        let weighted_mass = |f: &TestFunction, gamma: f64, cut: f64| -> f64 {
            let mut total = 0.0;
            let edges = [0.0, 1.0, 2.0, 10.0, 100.0, 1000.0, 10000.0];
            let cfg = QuadConfig {
                rel_tol: 1e-8,
                ..QuadConfig::default()
            };
            for w in edges.windows(2) {
                if w[0] >= cut {
                    break;
                }
                let hi = w[1].min(cut);
                for sign in [-1.0, 1.0] {
                    let r = integrate(
                        |x| {
                            let v = f.evaluate(sign * x).norm_sqr();
                            C64::new(v * (1.0 + x).powf(gamma), 0.0)
                        },
                        w[0],
                        hi,
                        cfg,
                    )
                    .unwrap();
                    total += r.value.re;
                }
            }
            total
        };

        let cases = [
            (TestFamily::PowerDecay { p: 1.2 }, 1.0, 2.0),
            (
                TestFamily::SlowIncrease {
                    positive_side: true,
                    k0: 0.7,
                    kappa: 0.5,
                },
                -2.5,
                -1.5,
            ),
            (
                TestFamily::SmoothedPsiZero {
                    z: C64::new(0.0, 2.0),
                    alpha: 0.0,
                },
                -1.5,
                0.0,
            ),
        ];
        for (family, member_gamma, outsider_gamma) in cases {
            let f = TestFunction::new(family).unwrap();
            assert!(f.in_weighted_class(member_gamma));
            assert!(!f.in_weighted_class(outsider_gamma));

            let masses: alloc::vec::Vec<f64> = [100.0, 1000.0, 10000.0]
                .iter()
                .map(|cut| weighted_mass(&f, member_gamma, *cut))
                .collect();
            let inc1 = masses[1] - masses[0];
            let inc2 = masses[2] - masses[1];
            assert!(
                inc2 < 0.5 * inc1,
                "member increments should shrink geometrically: {inc1:.3e} vs {inc2:.3e}"
            );

            let masses: alloc::vec::Vec<f64> = [100.0, 1000.0, 10000.0]
                .iter()
                .map(|cut| weighted_mass(&f, outsider_gamma, *cut))
                .collect();
            let inc1 = masses[1] - masses[0];
            let inc2 = masses[2] - masses[1];
            assert!(
                inc2 > 0.9 * inc1,
                "outsider increments should not shrink: {inc1:.3e} vs {inc2:.3e}"
            );
        }
    }

    #[test]
    fn support_hint_brackets_the_mass() {
        let cases = [
            TestFamily::Gaussian {
                sigma: 0.7,
                center: 1.0,
            },
            TestFamily::Bump { support: 2.0 },
            TestFamily::SmoothedPsiZero {
                z: C64::new(0.0, 2.0),
                alpha: 0.5,
            },
            TestFamily::PlaneWavePacket {
                k0: 1.3,
                width: 0.8,
            },
        ];
        for family in cases {
            let f = TestFunction::new(family).unwrap();
            let radius = match f.support_hint() {
                SupportHint::Compact { radius } | SupportHint::EffectivelyCompact { radius } => {
                    radius
                }
                SupportHint::Extended => panic!("{family:?} should truncate"),
            };
            for x in [-(radius + 0.1), radius + 0.1] {
                assert!(
                    f.evaluate(x).norm() <= 1e-17,
                    "mass outside hint for {family:?}"
                );
            }
            assert!(f.evaluate(radius * 0.05).norm() > 1e-3);
        }

        for family in [
            TestFamily::PowerDecay { p: 1.2 },
            TestFamily::SlowIncrease {
                positive_side: true,
                k0: 0.7,
                kappa: 0.3,
            },
            TestFamily::SmoothedPsiZero {
                z: C64::new(0.0, 2.0),
                alpha: 0.0,
            },
        ] {
            let f = TestFunction::new(family).unwrap();
            assert_eq!(f.support_hint(), SupportHint::Extended);
        }
    }

    // damping fades pointwise while the limit function drops out of every
    // class with weight exponent above -1
    #[test]
    fn damped_state_approaches_the_undamped_one() {
        let z = C64::new(0.0, 2.0);
        let limit = TestFunction::new(TestFamily::SmoothedPsiZero { z, alpha: 0.0 }).unwrap();
        let x = 1.7;
        let mut last = f64::INFINITY;
        for alpha in [0.4, 0.2, 0.1] {
            let f = TestFunction::new(TestFamily::SmoothedPsiZero { z, alpha }).unwrap();
            let gap = (f.evaluate(x) - limit.evaluate(x)).norm();
            assert!(
                gap < 0.7 * last,
                "gap {gap:.3e} not shrinking at alpha={alpha}"
            );
            assert!(f.in_weighted_class(0.0));
            last = gap;
        }
        assert!(!limit.in_weighted_class(0.0));
    }
}
