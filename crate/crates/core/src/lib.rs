//! Numerical toolkit for the Schrödinger map flow `∂ₜs = s × Δs` into the
//! unit sphere, written in the stereographic chart as a derivative
//! nonlinear Schrödinger equation on a periodic box.

pub mod error;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod nonlinearity;
pub mod solver;
pub mod spacetime;
pub mod spectral;

pub use error::{Result, SmapError};
pub use geometry::SphereField;
pub use grid::GridSpec;
pub use spectral::{ComplexField, Representation};
