//! Nevanlinna-Pick interpolation on the bidisk through Agler decompositions.
//!
//! [`agler`] decides `P = Gamma o X1 + Delta o X2` and bisects Pick and
//! separation constants, [`realization`] turns a certificate into a unitary
//! transfer-function realization, [`analysis`] reports separation, Carleson
//! and Riesz quantities, and [`cli`] backs the `bidisk-pick` binary.

pub mod agler;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod realization;

pub use error::{Error, Result};
pub use num_complex::Complex64;
