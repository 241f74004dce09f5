//! Focusing mKdV inverse scattering: direct scattering, exact reflectionless
//! solutions, long-time asymptotic formulas and a spectral PDE integrator.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod io;
pub mod painleve;
pub mod phase;
pub mod reflectionless;
pub mod scattering;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
