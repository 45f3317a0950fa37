//! Point interaction with purely imaginary coupling. The Hamiltonian
//! -d^2/dx^2 + z delta(x) with z on the imaginary axis is non-Hermitian but
//! transpose-symmetric; its transmission amplitude has a pole at the real
//! momentum k0 = -iz/2, which embeds a spectral singularity in the
//! continuous spectrum at lambda = k0^2.

use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

const INV_SQRT_2PI: f64 = 0.39894228040143267794;

/// sin(w)/w, series-stabilized near the origin.
fn sinc(w: C64) -> C64 {
    if w.norm() < 1e-4 {
        let w2 = w * w;
        C64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DeltaPotential {
    z: C64,
}

impl DeltaPotential {
    /// The coupling must be nonzero and purely imaginary; that is the
    /// regime where the transmission pole sits on the real momentum axis.
    pub fn new(z: C64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Parameter("delta: non-finite coupling"));
        }
        if z.norm() == 0.0 {
            return Err(Error::Parameter("delta: coupling must be nonzero"));
        }
        if z.re.abs() > 1e-14 * z.norm() {
            return Err(Error::Parameter("delta: coupling must be purely imaginary"));
        }
        Ok(Self {
            z: C64::new(0.0, z.im),
        })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    /// Real momentum of the transmission pole, k0 = -iz/2.
    pub fn k0(&self) -> f64 {
        0.5 * self.z.im
    }

    /// Spectral point lambda = k0^2 = -z^2/4, real and positive.
    pub fn singular_lambda(&self) -> f64 {
        let k0 = self.k0();
        k0 * k0
    }

    /// A point at distance `delta` from the singular energy, on the side of
    /// the cut where the resolvent diverges. The lambda + i0 boundary value
    /// carries momentum +sqrt(lambda), so it only reaches the pole when
    /// k0 > 0; for k0 < 0 the divergent side is lambda - i0.
    pub fn singular_approach(&self, delta: f64) -> C64 {
        C64::new(self.singular_lambda(), delta.copysign(self.k0()))
    }

    fn denom(&self, k: C64) -> Result<C64> {
        let d = 2.0 * k + C64::i() * self.z;
        if d.norm() < 1e-12 * self.z.norm() {
            return Err(Error::Pole("delta: momentum at the transmission pole"));
        }
        Ok(d)
    }

    /// Distance of 2k + iz from zero, the conditioning indicator for
    /// evaluations near the spectral singularity.
    pub fn resonance_denominator(&self, k: C64) -> f64 {
        (2.0 * k + C64::i() * self.z).norm()
    }

    pub fn transmission(&self, k: C64) -> Result<C64> {
        Ok(2.0 * k / self.denom(k)?)
    }

    pub fn reflection(&self, k: C64) -> Result<C64> {
        Ok(-C64::i() * self.z / self.denom(k)?)
    }

    /// Right-incident scattering state.
    pub fn psi_plus(&self, k: C64, x: f64) -> Result<C64> {
        let c = C64::i() * self.z / self.denom(k)?;
        let ikx = C64::i() * k * x;
        let ikax = C64::i() * k * x.abs();
        Ok(INV_SQRT_2PI * (ikx.exp() - c * ikax.exp()))
    }

    /// Biorthogonal partner state.
    pub fn psi_minus(&self, k: C64, x: f64) -> Result<C64> {
        let base = (-C64::i() * k * x).exp();
        let extra = if x > 0.0 {
            self.z * x * sinc(k * x)
        } else {
            C64::new(0.0, 0.0)
        };
        Ok(INV_SQRT_2PI * (base + extra))
    }

    /// State at the spectral singularity, normalized to 1 at the origin.
    pub fn psi_zero(&self, x: f64) -> C64 {
        C64::from_polar(1.0, self.k0() * x.abs())
    }

    /// Resolvent kernel of (h - lambda) on the lambda + i0 branch.
    pub fn green(&self, lambda: C64, x: f64, xp: f64) -> Result<C64> {
        let mut k = lambda.sqrt();
        if k.im < 0.0 {
            k = -k;
        }
        if k.norm() == 0.0 {
            return Err(Error::Domain("green: lambda = 0 is the branch point"));
        }
        let r = self.reflection(k)?;
        let pre = C64::i() / (2.0 * k);
        let direct = (C64::i() * k * (x - xp).abs()).exp();
        let scattered = (C64::i() * k * (x.abs() + xp.abs())).exp();
        Ok(pre * (direct + r * scattered))
    }

    /// Wronskian of the partner pair, psi_minus psi_plus' - psi_minus' psi_plus.
    /// Independent of x; the resolution over momenta needs no extra weight
    /// beyond it.
    pub fn wronskian(&self, k: C64) -> C64 {
        C64::i() * k / core::f64::consts::PI
    }

    /// The product psi_plus(k, x) psi_minus(k, x') in expanded form:
    ///
    ///   (1/2pi) [ e^{ik(x-x')} - (iz/(2k+iz)) e^{ik(|x|+|x'|)}
    ///             + 2iz theta(-x) theta(x') sin(kx) sin(kx')/k ]
    ///
    /// This is the shape the resolution integrals dissect term by term; it
    /// agrees with the direct product identically in k.
    pub fn kernel_integrand(&self, k: C64, x: f64, xp: f64) -> Result<C64> {
        let c = C64::i() * self.z / self.denom(k)?;
        let plane = (C64::i() * k * (x - xp)).exp();
        let pole = c * (C64::i() * k * (x.abs() + xp.abs())).exp();
        let corner = if x < 0.0 && xp > 0.0 {
            // sin(kx) sin(kx')/k, written with sinc so k -> 0 is regular
            2.0 * C64::i() * self.z * k * x * xp * sinc(k * x) * sinc(k * xp)
        } else {
            C64::new(0.0, 0.0)
        };
        Ok((plane - pole + corner) / (2.0 * core::f64::consts::PI))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn model() -> DeltaPotential {
        DeltaPotential::new(C64::new(0.0, -2.0)).unwrap()
    }

    #[test]
    fn validates_coupling() {
        assert!(DeltaPotential::new(C64::new(0.0, -2.0)).is_ok());
        assert!(DeltaPotential::new(C64::new(0.0, 0.7)).is_ok());
        assert!(DeltaPotential::new(C64::new(0.1, -2.0)).is_err());
        assert!(DeltaPotential::new(C64::new(0.0, 0.0)).is_err());
        assert!(DeltaPotential::new(C64::new(f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn pole_location() {
        let m = model();
        assert_eq!(m.k0(), -1.0);
        assert_eq!(m.singular_lambda(), 1.0);
        // 2k + iz vanishes exactly at k0
        assert!(m.resonance_denominator(C64::new(m.k0(), 0.0)) < 1e-15);
        assert!(m.transmission(C64::new(m.k0(), 0.0)).is_err());
    }

    #[test]
    fn scattering_pieces_recompose_psi_plus() {
        let m = model();
        let k = C64::new(0.83, 0.0);
        let t = m.transmission(k).unwrap();
        let r = m.reflection(k).unwrap();
        // transmitted side
        for x in [0.4, 2.7] {
            let want = INV_SQRT_2PI * t * (C64::i() * k * x).exp();
            assert!((m.psi_plus(k, x).unwrap() - want).norm() < 1e-15);
        }
        // incident plus reflected side
        for x in [-0.6, -3.1] {
            let want = INV_SQRT_2PI * ((C64::i() * k * x).exp() + r * (-C64::i() * k * x).exp());
            assert!((m.psi_plus(k, x).unwrap() - want).norm() < 1e-15);
        }
        // unitarity deficit is what makes the problem non-Hermitian;
        // t - r = 1 holds instead of |t|^2 + |r|^2 = 1
        assert!((t - r - 1.0).norm() < 1e-15);
    }

    fn second_derivative(f: impl Fn(f64) -> C64, x: f64, h: f64) -> C64 {
        (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    }

    #[test]
    fn states_solve_the_free_equation_off_origin() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let k = C64::new(rng.gen_range(0.3..3.0), rng.gen_range(-0.2..0.2));
            let mut x: f64 = rng.gen_range(0.5..4.0);
            if rng.gen_bool(0.5) {
                x = -x;
            }
            let h = 1e-4;
            for psi in [
                &(|x| m.psi_plus(k, x).unwrap()) as &dyn Fn(f64) -> C64,
                &(|x| m.psi_minus(k, x).unwrap()),
            ] {
                let lap = second_derivative(psi, x, h);
                let res = -lap - k * k * psi(x);
                assert!(res.norm() < 1e-5, "residual {} at k={k} x={x}", res.norm());
            }
        }
    }

    fn one_sided_slope(f: impl Fn(f64) -> C64, side: f64, h: f64) -> C64 {
        // second order, leaning into the half-line picked by `side`
        (-3.0 * f(0.0) + 4.0 * f(side * h) - f(side * 2.0 * h)) / (2.0 * side * h)
    }

    #[test]
    fn derivative_jump_matches_coupling() {
        let m = model();
        let h = 1e-5;
        for k in [C64::new(0.6, 0.0), C64::new(1.9, 0.1)] {
            for psi in [
                &(|x| m.psi_plus(k, x).unwrap()) as &dyn Fn(f64) -> C64,
                &(|x| m.psi_minus(k, x).unwrap()),
            ] {
                let jump = one_sided_slope(psi, 1.0, h) - one_sided_slope(psi, -1.0, h);
                assert!((jump - m.z() * psi(0.0)).norm() < 1e-7);
            }
        }
        // the singular state obeys the same matching
        let psi0 = |x: f64| m.psi_zero(x);
        let jump = one_sided_slope(psi0, 1.0, h) - one_sided_slope(psi0, -1.0, h);
        assert!((jump - m.z() * psi0(0.0)).norm() < 1e-7);
    }

    #[test]
    fn green_solves_resolvent_equation() {
        let m = model();
        let lambda = C64::new(2.3, 0.4);
        let xp = 0.7;
        // away from both the source and the origin
        for x in [-1.4, 0.3, 1.9] {
            let g = |x| m.green(lambda, x, xp).unwrap();
            let res = -second_derivative(g, x, 1e-4) - lambda * g(x);
            assert!(res.norm() < 1e-4, "x={x}: {}", res.norm());
        }
        // jump in dG/dx across x = 0 equals z G(0, x')
        let g = |x| m.green(lambda, x, xp).unwrap();
        let h = 1e-5;
        let jump = one_sided_slope(g, 1.0, h) - one_sided_slope(g, -1.0, h);
        assert!((jump - m.z() * g(0.0)).norm() < 1e-7);
        // jump in dG/dx across x = x' equals -1 (unit source)
        let gs = |u: f64| m.green(lambda, xp + u, xp).unwrap();
        let jump_src = one_sided_slope(gs, 1.0, h) - one_sided_slope(gs, -1.0, h);
        assert!((jump_src + 1.0).norm() < 1e-7);
    }

    #[test]
    fn resolvent_residue_at_the_singularity_factorizes() {
        let m = model();
        let l0 = m.singular_lambda();
        let (x, xp) = (0.8, -1.7);
        // (lambda - l0) G extrapolated to the pole along the divergent side
        let deltas = [1e-3, 5e-4, 2.5e-4, 1.25e-4];
        let ys: alloc::vec::Vec<C64> = deltas
            .iter()
            .map(|&d| {
                let lambda = m.singular_approach(d);
                (lambda - l0) * m.green(lambda, x, xp).unwrap()
            })
            .collect();
        let (res, _) = crate::quadrature::neville(&deltas, &ys, 0.0).unwrap();
        let want = 0.5 * m.z() * m.psi_zero(x) * m.psi_zero(xp);
        assert!((res - want).norm() < 1e-9, "{res} vs {want}");

        // the opposite side stays bounded, so the same product vanishes
        let other = C64::new(l0, -1e-6f64.copysign(m.k0()));
        let stray = (other - l0) * m.green(other, x, xp).unwrap();
        assert!(stray.norm() < 1e-4);
    }

    #[test]
    fn transmission_blows_up_near_the_singular_momentum() {
        let m = model();
        let k = C64::new(m.k0() * (1.0 + 1e-3), 0.0);
        let t = m.transmission(k).unwrap();
        assert!(t.norm() > 900.0 && t.norm() < 1100.0, "|t| = {}", t.norm());
    }

    #[test]
    fn expanded_product_matches_direct_product() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let k = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-0.5..0.5));
            if m.resonance_denominator(k) < 1e-3 {
                continue;
            }
            let x = rng.gen_range(-4.0..4.0);
            let xp = rng.gen_range(-4.0..4.0);
            let direct = m.psi_plus(k, x).unwrap() * m.psi_minus(k, xp).unwrap();
            let expanded = m.kernel_integrand(k, x, xp).unwrap();
            let scale = direct.norm().max(1.0);
            assert!(
                (direct - expanded).norm() < 1e-12 * scale,
                "k={k} x={x} xp={xp}: {direct} vs {expanded}"
            );
        }
    }

    #[test]
    fn wronskian_matches_finite_differences() {
        let m = model();
        let h = 1e-5;
        for k in [C64::new(0.9, 0.0), C64::new(-1.7, 0.3)] {
            for x in [-2.2, 1.5] {
                let p = |x| m.psi_plus(k, x).unwrap();
                let q = |x| m.psi_minus(k, x).unwrap();
                let dp = (p(x + h) - p(x - h)) / (2.0 * h);
                let dq = (q(x + h) - q(x - h)) / (2.0 * h);
                let w = q(x) * dp - dq * p(x);
                assert!(
                    (w - m.wronskian(k)).norm() < 1e-8,
                    "k={k} x={x}: {w} vs {}",
                    m.wronskian(k)
                );
            }
        }
    }

    #[test]
    fn singular_state_is_the_stalled_scattering_state() {
        // at momenta approaching k0 the transmitted side of psi_plus,
        // rescaled by 1/t, tends to the singular state on x > 0
        let m = model();
        let x = 1.3;
        let k = C64::new(m.k0() * (1.0 + 1e-7), 0.0);
        let t = m.transmission(k).unwrap();
        let scaled = m.psi_plus(k, x).unwrap() / (INV_SQRT_2PI * t);
        assert!((scaled - m.psi_zero(x)).norm() < 1e-5);
    }
}
