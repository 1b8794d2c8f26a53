//! Pseudospectral laboratory for the damped wave equation
//! `u_tt - Δu + u_t = I_γ(|u|^p)` on a periodic box.

pub mod bessel;
pub mod experiments;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod riesz;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Grid, SpectralField};
pub use params::ProblemParams;
