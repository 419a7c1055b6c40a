//! Radiative transfer in the highly forward-peaked regime.
//!
//! The scattering operator with kernel b(θ·θ′) ~ (1 − θ·θ′)^{-(d−1)/2−s} is
//! available in three interchangeable forms: diagonal in spherical harmonics,
//! as a weighted fractional Laplacian on the stereographic plane, and as a
//! weak-form double integral. A Strang-split solver evolves
//! ∂_t u + θ·∇_x u = I(u) on a periodic box, and the `experiments` module
//! runs the convergence and decay studies on top of it.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod fracop;
pub mod geom;
pub mod kernels;
pub mod quad;
pub mod scatter;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
