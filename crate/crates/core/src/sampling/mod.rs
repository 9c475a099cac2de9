//! Haar and Ginibre sampling, truncated products, and Monte Carlo estimators
//! for unitary group integrals.

pub mod group;
pub mod haar;
pub mod mc;
pub mod product;
pub mod rng;

pub use group::{
    cnp, diag, group_integral_rhs, hciz_exact, mc_group_integral, mc_hciz, theta_positive_definite,
    GroupIntegralEstimate,
};
pub use haar::{sample_ginibre, sample_haar_unitary, sample_truncation, ComplexMatrix};
pub use mc::{monte_carlo, monte_carlo_vec, Accumulator, McEstimate};
pub use product::{count_near_one, sample_product_draws, sample_product_squared_singvals, ProductSpec};
pub use rng::RngStream;
