//! Weight functions, normalizations and joint densities of the product
//! ensemble, plus the Mellin-convolution, Andréief and de Bruijn layer.

pub mod density;
pub mod transforms;
pub mod weights;

pub use density::{fixed_x_constant, joint_density_fixed_x, joint_density_product};
pub use transforms::{
    andreief_gram, andreief_lhs_mc, beta_mellin_transform, debruijn_transform, gamma_mellin_transform,
    mellin_bridge_distances, RealFn, TensorRule,
};
pub use weights::{normalization_zn, weight_moment, weight_moment_exact, weight_wk, WeightSystem};
