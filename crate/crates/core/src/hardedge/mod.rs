//! Hard-edge scaling limit at the origin: the scaling constant, the limit
//! kernel and its finite-rank perturbations, and finite-`n` comparisons.

pub mod bessel;
pub mod convergence;
pub mod limit;
pub mod spec;

pub use bessel::{bessel_j0, bessel_j1, bessel_kernel, bessel_limit_kernel};
pub use convergence::{convergence_experiment, errors_decrease, gamma_ratio_deviations, ConvergenceRow};
pub use limit::{limit_kernel, IntegrandForm, LimitKernel};
pub use spec::{rt_polynomial, scaling_constant, HardEdgeSpec};
