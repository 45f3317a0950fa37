//! Gauss hypergeometric function with complex parameters and real argument
//! in [0, 1).
//!
//! Direct power series; callers keep the argument at or below 1/2 through
//! the dual eigenfunction representations, so convergence is geometric in
//! all hot paths. Arguments up to 1 (exclusive) are still accepted for the
//! Legendre route, at the cost of more terms.

use crate::error::{Error, Result};
use crate::C64;

#[allow(unused_imports)]
use num_traits::Float;

/// Parameter block for a ₂F₁ evaluation: complex a, b, c; real arg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub arg: f64,
}

const MAX_TERMS: usize = 4000;

fn near_nonpositive_integer(c: C64) -> bool {
    let n = c.re.round();
    n <= 0.0 && (c - C64::new(n, 0.0)).norm() < 1e-10
}

/// ₂F₁(a, b; c; x) for real x in [0, 1).
pub fn hyp2f1(p: Hyp2F1Params) -> Result<C64> {
    let Hyp2F1Params { a, b, c, arg: x } = p;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain("hyp2f1: argument outside [0,1)"));
    }
    if near_nonpositive_integer(c) {
        return Err(Error::Pole("hyp2f1: c at a non-positive integer"));
    }
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        // two consecutive negligible terms guard against accidental zeros
        if term.norm() <= 1e-16 * sum.norm() {
            let peek = term * (a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0)) * x;
            if peek.norm() <= 1e-16 * sum.norm() {
                return crate::error::ensure_finite(sum, "hyp2f1");
            }
        }
    }
    Err(Error::Convergence("hyp2f1: term budget exhausted"))
}

/// d/dx ₂F₁(a, b; c; x) = (ab/c) ₂F₁(a+1, b+1; c+1; x).
pub fn hyp2f1_deriv(p: Hyp2F1Params) -> Result<C64> {
    let shifted = Hyp2F1Params {
        a: p.a + 1.0,
        b: p.b + 1.0,
        c: p.c + 1.0,
        arg: p.arg,
    };
    Ok(p.a * p.b / p.c * hyp2f1(shifted)?)
}
