//! Positive maps and entanglement witnesses built from mutually unbiased bases.

pub mod angle;
pub mod blockpos;
pub mod detect;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod mub;
pub mod random;
pub mod rotation;
pub mod weyl;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{BipartiteDims, ComplexMatrix, C64};
