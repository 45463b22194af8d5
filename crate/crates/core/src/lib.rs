//! Resonance lattices, ergodization times and Diophantine bounds for linear
//! flows on tori.

pub mod approx;
pub mod circle;
pub mod error;
pub mod ergodization;
pub mod lattice;
pub mod rational;
pub mod report;
pub mod resonance;
pub mod scalars;

pub use error::{Error, Result};
