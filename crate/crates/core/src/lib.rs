//! Singular tuples (eigenvectors) of symmetric and multisymmetric tensors.
//!
//! Exact sparse polynomials ([`poly`]) carry tensors ([`tensor`]) whose
//! singular tuples are counted by [`ed`], found by [`eigen`], and used to
//! rebuild the tensor in [`fiber`]. [`harmonic`] and [`cohomology`] check
//! the algebraic facts behind the reconstruction, and [`battery`] runs the
//! whole reproduction suite.

pub mod battery;
pub mod cohomology;
pub mod ed;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod fiber;
pub mod harmonic;
pub mod poly;
pub mod tensor;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
