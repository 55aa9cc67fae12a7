//! Quadratic phase-space distributions on uniform grids: Wigner,
//! Born–Jordan and general Cohen-class kernels, closed-form Gaussian
//! evaluators, metaplectic signal transforms and Weyl quantization.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fft;
pub mod field;
pub mod gaussians;
pub mod grid;
pub mod harness;
pub mod kernel;
pub mod linalg;
pub mod metaplectic;
pub mod quantize;
pub mod resample;
pub mod signal;
pub mod state;
pub mod symplectic;
pub mod tfdist;

pub use error::{Error, Result};
pub use field::{PhaseField, ValueKind};
pub use grid::{make_spatial_grid, HBarConfig, PhaseGrid, SpatialGrid};
pub use kernel::{born_jordan_kernel, CohenKernel};
pub use signal::Signal;
pub use num_complex::Complex64;
