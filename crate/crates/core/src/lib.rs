//! Pseudo-spectral passive-scalar mixing toolkit.
//!
//! The whole space ℝ^d (d = 2, 3) is approximated by a periodic box
//! `[-L, L)^d`. Fields live on the box as physical samples or as Fourier
//! coefficients scaled to approximate the continuum transform
//! `θ̂(ξ) = ∫ e^{-iξ·x} θ(x) dx`.
//!
//! * [`spectral`]: grid, transforms and the mixing norms (L², Ḣ¹, Ḣ⁻¹,
//!   filamentation length, low-mode mass).
//! * [`fields`]: closed-form initial data and decaying divergence-free
//!   velocity fields.
//! * [`solver`]: integrating-factor RK4 for the advection-diffusion
//!   equation, the heat/remainder split and runtime diagnostics.
//! * [`decay_character`]: estimation of the decay character of sampled data.
//! * [`bounds`]: the algebraic decay-bound curves, their validity gates and
//!   the long-time classification of the filamentation length.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod bounds;
pub mod decay_character;
mod error;
pub mod fields;
pub(crate) mod math;
pub mod rational;
pub mod regression;
pub mod solver;
pub mod spectral;

pub use error::{CoreError, Result};
pub use num_complex::Complex64;
pub use rational::Rational;
