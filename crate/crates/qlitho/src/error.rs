//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A transverse momentum outside the propagating support `|kappa| < omega/c`.
    #[error("evanescent mode: |kappa| = {kappa:.6e} >= omega/c = {kappa_max:.6e}")]
    EvanescentMode { kappa: f64, kappa_max: f64 },

    /// A rotation carried a mode out of the forward-propagating half-space.
    #[error("rotated mode leaves the forward half-space (k_z' = {kz_rot:.6e} <= 0)")]
    BackwardRotation { kz_rot: f64 },

    /// A mode spectrum whose support pokes outside the light cone in the
    /// non-paraxial regime.
    #[error(
        "mode support [{lo:.6e}, {hi:.6e}] exceeds the propagating window \
         ({win_lo:.6e}, {win_hi:.6e})"
    )]
    ModeOutsideLightCone {
        lo: f64,
        hi: f64,
        win_lo: f64,
        win_hi: f64,
    },

    /// Bad argument (length mismatch, nonpositive width, malformed grid, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A constructor precondition failed.
    #[error("construction failed: {0}")]
    Construction(String),

    /// The requested computation is outside what the implementation supports
    /// (e.g. tensor quadrature beyond three dimensions).
    #[error("not supported: {0}")]
    Capability(String),

    /// A scan or transform grid too coarse for the structure it must resolve.
    /// `required_spacing` is the largest admissible step.
    #[error(
        "under-resolved grid: spacing {spacing:.6e} exceeds {required_spacing:.6e} \
         (need >= {points_per_feature} points per feature of size {feature:.6e})"
    )]
    UnderResolved {
        spacing: f64,
        required_spacing: f64,
        feature: f64,
        points_per_feature: usize,
    },

    /// Adaptive quadrature ran out of panels; carries the best estimate.
    #[error(
        "quadrature did not converge after {panels} panels: \
         best estimate {best_re:.9e} + {best_im:.9e}i, error {error_estimate:.3e}"
    )]
    QuadratureNoConvergence {
        best_re: f64,
        best_im: f64,
        error_estimate: f64,
        panels: usize,
    },

    /// A computed pattern violated the universal absorption-rate ceiling.
    #[error(
        "pattern value {value:.9e} exceeds the N-photon rate bound {bound:.9e} \
         (state `{label}`); the state parameters are outside the regime in \
         which the sampled representation is faithful"
    )]
    BoundViolation {
        value: f64,
        bound: f64,
        label: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed grid-amplitude file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
