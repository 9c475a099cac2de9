//! Singular-value statistics of products of truncated Haar-unitary matrices.
//!
//! Two independent routes are provided and cross-checked: exact analytic
//! kernels built from residue calculus in rational arithmetic, and Monte
//! Carlo sampling of the matrices themselves.

pub mod ensembles;
pub mod error;
pub mod exec;
pub mod hardedge;
pub mod kernels;
pub mod sampling;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use sampling::ProductSpec;
