//! Numerical models of quantized two-dimensional monochromatic optical
//! fields: momentum-space multiphoton amplitudes, their spatial interference
//! patterns, and N-photon absorption rates, together with the analytics that
//! relate resolution enhancement to the achievable absorption rate.
//!
//! Module map:
//!
//! * [`field`] — optical context, geometric factor, mode rotations, and the
//!   universal absorption-rate ceiling.
//! * [`states`] — the momentum-space state catalog (NOON, classical product,
//!   jointly Gaussian, biphoton double-slit, custom grids) with
//!   normalization and exchange-symmetry verification.
//! * [`propagate`] — spatial amplitudes: beam envelopes, fast paths, and the
//!   tensor-quadrature oracle.
//! * [`absorption`] — absorption rates, sampled patterns, fringe metrics,
//!   and the discrete-absorber bin model.
//! * [`gaussian`] — closed-form trade-off analytics for the jointly Gaussian
//!   state, with independent Monte Carlo samplers.
//! * [`double_slit`] — the biphoton two-slit experiment and its angular
//!   coincidence pattern.
//! * [`numerics`] — quadrature, grid transforms, and deterministic Monte
//!   Carlo.

// Validation intentionally uses `!(x > 0)` so NaN parameters are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature node/weight tables keep their published digit counts.
#![allow(clippy::excessive_precision)]

pub mod absorption;
pub mod double_slit;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod numerics;
pub mod propagate;
pub mod states;

pub use absorption::PatternScan;
pub use error::{Error, Result};
pub use field::OpticalContext;
pub use gaussian::GaussianParams;
pub use numerics::{QuadratureSpec, RandomPlan};
pub use propagate::Regime;
pub use states::{ModeSpectrum, MomentumAmplitude};
