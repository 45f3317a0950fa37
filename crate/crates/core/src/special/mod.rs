//! Special functions on complex arguments: gamma, Gauss hypergeometric
//! ₂F₁ with complex parameters and real argument, sine/cosine integrals,
//! and the Ferrers associated Legendre function of the first kind.
//!
//! Everything here is self-contained (series, continued fractions, rational
//! approximations); no external math backend.

mod gamma;
mod hyp2f1;
mod legendre;
mod sici;

pub use gamma::{gamma, sin_pi};
pub use hyp2f1::{hyp2f1, hyp2f1_deriv, Hyp2F1Params};
pub use legendre::legendre_p;
pub use sici::{cos_integral, exp_integral_over_u, sin_integral};
