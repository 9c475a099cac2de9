//! The biorthogonal pair `(P_k, Q_k)`, the finite-`n` correlation kernel by
//! an exact sum and by double contour quadrature, and the telescoping
//! identity behind the double integral.

pub mod biorthogonal;
pub mod contour;
pub mod telescoping;

pub use biorthogonal::{pk_coefficients, qk_expansion, qk_moment, qk_moment_exact, BiorthogonalSystem};
pub use contour::{kernel_kn_contour, ContourKernel, ContourOptions};
pub use telescoping::{telescoping_check, telescoping_lhs, telescoping_rhs};

/// `K_n(x, y)` by the exact sum route.
pub fn kernel_kn_sum(system: &BiorthogonalSystem, x: f64, y: f64) -> f64 {
    system.kernel(x, y)
}
