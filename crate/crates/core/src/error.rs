//! Error type shared by all numeric modules.
//!
//! Every public operation validates its inputs and its output: a NaN or
//! infinite result is never returned silently, it becomes `Error::NonFinite`.

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    Domain(&'static str),
    /// Evaluation requested at (or too close to) a pole.
    Pole(&'static str),
    /// Series or quadrature failed to converge within its budget.
    Convergence(&'static str),
    /// Structural parameter violates a type invariant.
    Parameter(&'static str),
    /// A resolution form was applied to a test function outside its
    /// validity class.
    ClassViolation(&'static str),
    /// A computed value came out NaN or infinite.
    NonFinite(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::Pole(s) => write!(f, "pole error: {s}"),
            Error::Convergence(s) => write!(f, "convergence failure: {s}"),
            Error::Parameter(s) => write!(f, "parameter error: {s}"),
            Error::ClassViolation(s) => write!(f, "test-function class violation: {s}"),
            Error::NonFinite(s) => write!(f, "non-finite result: {s}"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

/// Guard: reject non-finite complex results at operation boundaries.
pub(crate) fn ensure_finite(v: crate::C64, what: &'static str) -> Result<crate::C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}
