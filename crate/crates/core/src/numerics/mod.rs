//! Root finding, residue sums, quadrature and time integration.

pub mod cubic;
pub mod kernel;
pub mod ode;
pub mod quadrature;
pub mod residue;

pub use cubic::{solve_cubic, CubicRoots};
pub use kernel::{Poles, SpectralKernel};
pub use ode::{OdeOptions, OdeStats};
pub use quadrature::{
    integrate, integrate_frequency, integrate_frequency_2d, Estimate, QuadratureSpec,
};
pub use residue::{
    degenerate_pole_guard, residue_sum, residue_sum_with, Horizon, PoleGuard, Poly,
    DEFAULT_DEGENERACY_TOL,
};
