//! Periodic-box discretisation, transforms and mixing norms.

pub mod fft;
pub(crate) mod field;
mod grid;

pub use field::{
    divergence_max, filamentation_length, forward, grad_l2_norm, inv_grad_l2_norm, inverse,
    l2_norm, low_mode_mass, InvGradNorm, ScalarSamples, SpectralField, VectorSamples,
};
pub use grid::Grid;
