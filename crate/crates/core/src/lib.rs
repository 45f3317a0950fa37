//! Numerical kernels for verifying resolutions of identity of non-Hermitian
//! one-dimensional Hamiltonians with a spectral singularity in the continuum.
//!
//! Two model families are covered: the point interaction −d²/dx² + zδ(x) with
//! purely imaginary coupling z, and its smooth sech² regularization
//! −d²/dx² − (z/2)(z/2−α)/cosh²(αx). Both have a real-energy spectral
//! singularity at λ = −z²/4, where the standard eigenfunction completeness
//! integral degenerates. The modules here evaluate the competing resolution
//! forms (deformed contour, ε-split, reduced, principal-value, paired
//! scattering) against classes of test functions, together with the special
//! functions, contour quadrature and explicit error bounds this requires.
//!
//! The crate is `no_std` + `alloc`; everything is deterministic pure
//! computation. IO, configuration and reporting live in the companion CLI
//! crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
// frozen reference values keep every digit of the source computation
#![allow(clippy::excessive_precision)]
// guards written as !(x > 0.0) reject NaN; the suggested x <= 0.0 would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod delta;
pub mod error;
pub mod quadrature;
pub mod resolution;
pub mod smooth;
pub mod special;
pub mod testfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex value alias used throughout; `f64` components.
pub type C64 = num_complex::Complex64;
