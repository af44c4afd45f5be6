//! Shared numerical engine: adaptive 1D quadrature with edge clustering,
//! tensor-product quadrature up to three dimensions, uniform-grid Fourier
//! transforms in the continuous convention, and seeded splittable Monte Carlo.

mod fourier;
mod quad;
mod rng;
mod tensor;

pub use fourier::{gaussian_self_transform, grid_fourier, rect_transform, MIN_SAMPLES_PER_FRINGE};
pub use quad::{composite_gk15, integrate_1d, integrate_1d_real, QuadratureSpec};
pub use rng::{mc_expectation, CounterRng, McEstimate, RandomPlan};
pub use tensor::{gauss_legendre, integrate_nd};
