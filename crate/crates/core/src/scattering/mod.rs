//! Direct scattering: Jost solutions, transition coefficients, reflection
//! coefficient, discrete spectrum and norming constants.

mod data;
mod jost;
mod potential;
mod spectrum;

pub use data::{
    evolve_scattering, reflection, validate_genericity, DiscreteEigenpair, EigenKind, GenericityReport,
    ScatteringData, ZGrid,
};
pub use jost::{a_breve, a_breve_with_derivative, jost_solve, jost_solve_tol, JostPair, JOST_TOL};
pub use potential::PotentialSample;
pub use spectrum::{
    a_breve_derivative_contour, find_discrete_spectrum, norming_constants, scatter, scatter_in_box,
    transition_coefficients, DiscreteSpectrum, SearchBox, TransitionSample,
};
