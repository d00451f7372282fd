//! Exact finite-dimensional Toeplitz operators for the flat Bargmann model
//! over `C^n` and for the spin model over the sphere, together with the
//! machinery to compare their low-lying spectra against harmonic models.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line live in the `toeplitz-cli` companion crate.

#![no_std]
// `num_traits::Float` supplies float methods without std. Whenever std is in
// the crate graph its inherent methods take precedence and the imports look
// unused.
#![allow(unused_imports)]
// `!(x < tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod flat;
pub mod numerics;
pub mod sphere;
mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use state::QuantumState;
