//! Numerical integration machinery: adaptive Gauss-Kronrod panels, complex
//! contours with a pole-avoiding arc, principal values by excision
//! extrapolation, closed-form pole kernels, and tail acceleration.

mod cauchy;
mod gk;
mod path;
mod pv;
mod tail;

pub use cauchy::{
    cauchy_kernel_integral, excised_lines_kernel, pole_window_integral, principal_value_kernel,
    sinsin_window,
};
pub use gk::{integrate, QuadConfig, QuadratureResult};
pub use path::{
    integrate_arc, integrate_contour, integrate_lines, integrate_segment, ContourSpec, PathSegment,
};
pub use pv::pv_integral;
pub use tail::{neville, oscillatory_tail, wynn_epsilon};
