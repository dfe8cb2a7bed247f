//! Dense kernels with optional multiply counting.

mod counter;
mod eigen;
mod lu;
mod matrix;

pub use counter::OpCounter;
pub use eigen::{eig_dense, eig_dense_counted, eig_with_vectors, eigenvector_for, sort_spectrum, Eigen};
pub use lu::{lu_det, lu_det_counted, lu_inverse, lu_inverse_counted, lu_solve, Lu};
pub use matrix::{kron, Matrix};
