//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is sized for Pick problems on a handful of nodes:
//! matrices of dimension up to a few dozen.

mod eigen;
mod factor;
mod matrix;
mod unitary;

pub use eigen::{eigh, eigh_warm, project_psd, EigenDecomposition, MAX_SWEEPS, OFF_DIAGONAL_RTOL};
pub use factor::{psd_factor, solve, Cholesky};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use unitary::{complete_to_unitary, gram_mismatch, gram_schmidt, inner, norm, DEPENDENCE_TOL};
