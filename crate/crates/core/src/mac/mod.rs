//! Staggered (MAC) grid storage and spatial operators.
//!
//! Pressure lives at cell centres, velocity component `k` on the faces
//! normal to axis `k`. Divergence and gradient are negative adjoints of each
//! other for velocities that vanish on the wall faces.

mod field;
mod ops;

pub use field::{Location, MacGrid, Neighbor, ScalarField, VelocityField};
pub use ops::{
    advect, apply_dirichlet, apply_dirichlet_vec, apply_dirichlet_vec_zero, apply_dirichlet_zero,
    div_kappa_grad, divergence, dot, dot_vec, fill_zero_gradient, gradient, gradient_axis,
    l2_norm, l2_norm_vec, mixed_derivative, own_diffusion, partial_to_cells, weight_cells,
    weighted_sq_norm, zero_walls, Varpi,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("layout mismatch: {0}")]
    Mismatch(String),
    #[error("invalid parameter: {0}")]
    Param(String),
}
