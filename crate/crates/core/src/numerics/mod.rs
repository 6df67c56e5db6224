//! Special functions and numerical building blocks.

mod dawson;
mod grid;
mod ode;
mod quadrature;

pub use dawson::{dawson, dawson_sine};
pub use grid::{cumulative_trapezoid, TimeGrid};
pub use ode::rk4_step;
pub use quadrature::{integrate, integrate_semiinf, QuadValue, Quadrature, QuadratureSpec, GAUSSIAN_TAIL_CUTOFF};
