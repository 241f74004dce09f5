//! Complex special functions, quadrature rules and an adaptive ODE integrator.

mod airy;
mod gamma;
mod ode;
mod quad;

pub use airy::{airy_ai, airy_ai_prime, airy_asymptotic};
pub use gamma::{gamma, log_gamma};
pub use ode::{ode_integrate, Dopri5, OdeState, Trajectory};
pub use quad::{cauchy_pv_integral, QuadratureKind, QuadratureRule};
