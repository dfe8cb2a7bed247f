//! Differential quadrature (DQ) weighting matrices on symmetric grids and the
//! centrosymmetric / skew-centrosymmetric algebra that halves the cost of their
//! determinants, inverses and eigenproblems.
//!
//! Modules, bottom-up:
//! - [`linalg`]: dense LU, nonsymmetric eigensolver, Kronecker product, multiply counters.
//! - [`grid`]: uniform and shifted-Chebyshev node sets on `[0, 1]`.
//! - [`weights`]: DQ weighting matrices of any order and their symmetry class.
//! - [`centro`]: block splitting and factorized det / inverse / eigen.
//! - [`problems`]: beam, plate, skew plate and convection-diffusion solvers.
//! - [`analysis`]: truncation-error profiles and the multiply-count benchmark.

pub mod analysis;
pub mod centro;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod problems;
pub mod weights;

pub use error::{DqError, Result};
