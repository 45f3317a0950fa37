//! Ferrers associated Legendre function of the first kind on the cut,
//! complex degree and order:
//!
//! P^μ_ν(τ) = ((1+τ)/(1−τ))^{μ/2} / Γ(1−μ) · ₂F₁(−ν, ν+1; 1−μ; (1−τ)/2)
//!
//! for τ in (−1, 1). This is the representation the sech² eigenfunctions
//! reduce to with τ = ±tanh(αx), μ = ik/α, ν = −z/2α.

use crate::error::{Error, Result};
use crate::special::{gamma, hyp2f1, Hyp2F1Params};
use crate::C64;

pub fn legendre_p(mu: C64, nu: C64, tau: f64) -> Result<C64> {
    if !(-1.0 < tau && tau < 1.0) {
        return Err(Error::Domain("legendre_p: tau must lie in (-1, 1)"));
    }
    let f = hyp2f1(Hyp2F1Params {
        a: -nu,
        b: nu + 1.0,
        c: C64::new(1.0, 0.0) - mu,
        arg: (1.0 - tau) / 2.0,
    })?;
    let ratio = C64::new((1.0 + tau) / (1.0 - tau), 0.0);
    let pref = ratio.powc(mu / 2.0);
    let g = gamma(C64::new(1.0, 0.0) - mu)?;
    crate::error::ensure_finite(pref / g * f, "legendre_p")
}
