//! Closed-form kernels for the point model: the integral of
//! psi_plus(x) psi_minus(x') over a truncated momentum range, under each of
//! the pole-handling procedures the resolution forms prescribe.
//!
//! Every kernel here is an exact finite-truncation evaluation, not an
//! asymptotic one, so the identities between forms (split total equals the
//! contour kernel, scattering plus its supplementary window equals the
//! contour kernel) hold to rounding and are pinned that tightly in tests.

use crate::delta::DeltaPotential;
use crate::quadrature::{cauchy_kernel_integral, excised_lines_kernel, sinsin_window};
use crate::special::{exp_integral_over_u, sin_integral};
use crate::{Error, Result, C64};

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::{FRAC_1_PI, PI};

/// sin(s dx) / dx, series-stabilized where s dx is small.
fn scaled_sinc(s: f64, dx: f64) -> f64 {
    let w = s * dx;
    if w.abs() < 1e-4 {
        let w2 = w * w;
        s * (1.0 - w2 / 6.0 + w2 * w2 / 120.0)
    } else {
        w.sin() / dx
    }
}

/// sin(a dx) / (pi dx), the free-line kernel truncated at |k| = a.
pub fn dirichlet(a: f64, dx: f64) -> f64 {
    scaled_sinc(a, dx) * FRAC_1_PI
}

fn check_window(pot: &DeltaPotential, eps: f64) -> Result<()> {
    if !(eps > 0.0) || eps >= pot.k0().abs() {
        return Err(Error::Parameter("kernels: need 0 < eps < |k0|"));
    }
    Ok(())
}

/// Kernel over the contour that detours around the pole momentum on a small
/// arc. The arc radius drops out by analyticity, so the value depends only
/// on the truncation.
pub fn contour(pot: &DeltaPotential, x: f64, xp: f64, a: f64) -> Result<C64> {
    let r = x.abs() + xp.abs();
    let ck = cauchy_kernel_integral(r, pot.k0(), a)?;
    Ok(C64::new(dirichlet(a, x - xp), 0.0) - C64::i() * pot.z() / (4.0 * PI) * ck)
}

/// Plane-wave window term alone: the slow sinc ridge along x = x' that the
/// excision leaves behind. Exposed so its action on a test function can be
/// integrated separately from the rest of the kernel.
pub fn sinc_window_term(pot: &DeltaPotential, x: f64, xp: f64, eps: f64) -> Result<C64> {
    check_window(pot, eps)?;
    let dx = x - xp;
    Ok(C64::from_polar(FRAC_1_PI, pot.k0() * dx) * scaled_sinc(eps, dx))
}

/// Corner window term alone, supported on x < 0 < x'.
pub fn sin_sin_window_term(pot: &DeltaPotential, x: f64, xp: f64, eps: f64) -> Result<C64> {
    check_window(pot, eps)?;
    if x < 0.0 && xp > 0.0 {
        Ok(C64::i() * pot.z() * FRAC_1_PI * sinsin_window(x, xp, pot.k0(), eps)?)
    } else {
        Ok(C64::new(0.0, 0.0))
    }
}

/// The four pieces the excision procedure separates the contour kernel into.
/// `lines` is the integral with the window (k0 - eps, k0 + eps) removed; the
/// window itself contributes the plane-wave term, the corner term, and the
/// pole dyad with its arc correction.
#[derive(Clone, Copy, Debug)]
pub struct SplitTerms {
    pub lines: C64,
    pub sinc_term: C64,
    pub sin_sin_term: C64,
    pub dyad_term: C64,
}

impl SplitTerms {
    pub fn total(&self) -> C64 {
        self.lines + self.sinc_term + self.sin_sin_term + self.dyad_term
    }
}

pub fn split_terms(pot: &DeltaPotential, x: f64, xp: f64, a: f64, eps: f64) -> Result<SplitTerms> {
    check_window(pot, eps)?;
    let k0 = pot.k0();
    if a <= k0.abs() + eps {
        return Err(Error::Parameter("kernels: need a > |k0| + eps"));
    }
    let z = pot.z();
    let dx = x - xp;
    let r = x.abs() + xp.abs();

    let sinc_term = sinc_window_term(pot, x, xp, eps)?;
    let sin_sin_term = sin_sin_window_term(pot, x, xp, eps)?;
    let excised = excised_lines_kernel(r, k0, a, eps)?;
    let lines = C64::new(dirichlet(a, dx), 0.0)
        - sinc_term
        - sin_sin_term
        - C64::i() * z / (4.0 * PI) * excised;
    let arc_fraction = 1.0 - 2.0 * FRAC_1_PI * sin_integral(eps * r)?;
    let dyad_term = -(z / 4.0) * pot.psi_zero(x) * pot.psi_zero(xp) * arc_fraction;
    Ok(SplitTerms {
        lines,
        sinc_term,
        sin_sin_term,
        dyad_term,
    })
}

/// Excised lines plus all three window terms; identical to `contour` for
/// every admissible (a, eps), which is the content of the split.
pub fn epsilon_split(pot: &DeltaPotential, x: f64, xp: f64, a: f64, eps: f64) -> Result<C64> {
    Ok(split_terms(pot, x, xp, a, eps)?.total())
}

/// Excised lines plus the dyad alone. The dropped window terms vanish with
/// eps only after integration against sufficiently decaying functions, which
/// is what restricts this form's validity class.
pub fn reduced(pot: &DeltaPotential, x: f64, xp: f64, a: f64, eps: f64) -> Result<C64> {
    let st = split_terms(pot, x, xp, a, eps)?;
    Ok(st.lines + st.dyad_term)
}

/// Excised lines plus the bare dyad, without the arc correction; the
/// excision limit of this combination reproduces the contour kernel, so the
/// principal-value prescription and the deformed contour agree in class.
pub fn principal_value(pot: &DeltaPotential, x: f64, xp: f64, a: f64, eps: f64) -> Result<C64> {
    let st = split_terms(pot, x, xp, a, eps)?;
    Ok(st.lines - pot.z() / 4.0 * pot.psi_zero(x) * pot.psi_zero(xp))
}

/// Window integral of the kernel around the mirror momentum -k0. Folding
/// the momentum line onto the half-line excises this window too, so the
/// scattering-paired kernels are the excised lines minus this piece.
pub fn fold_window(pot: &DeltaPotential, x: f64, xp: f64, eps: f64) -> Result<C64> {
    check_window(pot, eps)?;
    let k0 = pot.k0();
    let z = pot.z();
    let dx = x - xp;
    let r = x.abs() + xp.abs();

    let sinc_part = C64::from_polar(FRAC_1_PI, -k0 * dx) * scaled_sinc(eps, dx);
    let sin_sin_part = if x < 0.0 && xp > 0.0 {
        C64::i() * z * FRAC_1_PI * sinsin_window(x, xp, -k0, eps)?
    } else {
        C64::new(0.0, 0.0)
    };
    let shifted = exp_integral_over_u(-2.0 * k0 - eps, -2.0 * k0 + eps, r)?;
    let pole_part = C64::i() * z / (4.0 * PI) * C64::from_polar(1.0, k0 * r) * shifted;
    Ok(sinc_part + sin_sin_part - pole_part)
}

/// Kernel of the half-line forms built from scattering-state pairs: the
/// excised lines with the mirror window also removed, plus the corrected
/// dyad. Both the paired and the symmetrized integrand fold to the same
/// full-line integrand, so one kernel serves both forms.
pub fn scattering(pot: &DeltaPotential, x: f64, xp: f64, a: f64, eps: f64) -> Result<C64> {
    let st = split_terms(pot, x, xp, a, eps)?;
    Ok(st.lines - fold_window(pot, x, xp, eps)? + st.dyad_term)
}

/// What the half-line forms are missing relative to the contour kernel at
/// finite (a, eps): a symmetrized plane-wave window plus the mirror pole
/// window. Adding this to `scattering` recovers `contour` exactly.
pub fn supplementary_window(pot: &DeltaPotential, x: f64, xp: f64, eps: f64) -> Result<C64> {
    check_window(pot, eps)?;
    let k0 = pot.k0();
    let dx = x - xp;
    let r = x.abs() + xp.abs();
    let cos_part = 2.0 * FRAC_1_PI * (k0 * dx).cos() * scaled_sinc(eps, dx);
    let shifted = exp_integral_over_u(-2.0 * k0 - eps, -2.0 * k0 + eps, r)?;
    let pole_part = C64::i() * pot.z() / (4.0 * PI) * C64::from_polar(1.0, k0 * r) * shifted;
    Ok(C64::new(cos_part, 0.0) - pole_part)
}

/// The full-line integrand folded onto k > 0.
pub fn folded_integrand(pot: &DeltaPotential, x: f64, xp: f64, k: f64) -> Result<C64> {
    let kk = C64::new(k, 0.0);
    Ok(pot.kernel_integrand(kk, x, xp)? + pot.kernel_integrand(-kk, x, xp)?)
}

/// Integrand of the paired scattering form,
/// psi_plus(k, x) psi_plus(-k, x') + t(k) t(-k) psi_minus(k, x) psi_minus(-k, x').
/// Equal to `folded_integrand` pointwise.
pub fn paired_integrand(pot: &DeltaPotential, x: f64, xp: f64, k: f64) -> Result<C64> {
    let kk = C64::new(k, 0.0);
    let t = pot.transmission(kk)? * pot.transmission(-kk)?;
    Ok(pot.psi_plus(kk, x)? * pot.psi_plus(-kk, xp)?
        + t * pot.psi_minus(kk, x)? * pot.psi_minus(-kk, xp)?)
}

/// Integrand of the symmetrized scattering form, with every state taken at
/// the same momentum and the asymmetry pushed into reflection-weighted
/// same-state products. Equal to `folded_integrand` pointwise.
pub fn symmetric_integrand(pot: &DeltaPotential, x: f64, xp: f64, k: f64) -> Result<C64> {
    let kk = C64::new(k, 0.0);
    let t = pot.transmission(kk)? * pot.transmission(-kk)?;
    let plus_x = pot.psi_plus(kk, x)?;
    let plus_xp = pot.psi_plus(kk, xp)?;
    let minus_x = pot.psi_minus(kk, x)?;
    let minus_xp = pot.psi_minus(kk, xp)?;
    Ok(
        pot.reflection(-kk)? * plus_x * plus_xp + t * (plus_x * minus_xp + minus_x * plus_xp)
            - t * pot.reflection(kk)? * minus_x * minus_xp,
    )
}
