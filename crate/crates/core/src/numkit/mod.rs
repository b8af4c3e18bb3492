//! Numerical kernels shared by the geometry modules: small dense vectors,
//! orthonormalization, five-point stencils, quadrature, interpolation and a
//! fixed-step Runge-Kutta integrator.

mod grid;
mod interp;
mod ode;
mod orthonormal;
mod quadrature;
mod stencil;
mod vector;

pub use grid::{Grid, MIN_GRID_NODES};
pub use interp::{interp_vectors, MonotoneCubic};
pub use ode::{integrate_ode, integrate_ode_with};
pub use orthonormal::{complete_orientation, gram_schmidt};
pub use quadrature::cumulative_quadrature;
pub use stencil::{diff_field, diff_stencil, STENCIL_WIDTH};
pub use vector::{determinant, VecN, MAX_DIM, MIN_DIM};
