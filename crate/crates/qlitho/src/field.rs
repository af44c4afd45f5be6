//! Optical context and non-paraxial geometry.
//!
//! A monochromatic 2D field is characterized by its angular frequency, the
//! one-photon intensity scale `eta`, and the propagating-momentum window
//! `|kappa| < omega/c`. The geometric factor `gamma(kappa)` weights each
//! momentum component of the spatial transform and is fixed, up to a
//! constant, by rotation invariance in the propagation plane.

use crate::error::{Error, Result};

/// Frequency, wavelength, and intensity scales for one simulation.
///
/// All claims handled by this crate are scale-free, so the default context
/// works in wavelength units (`lambda = 1`, `c = 1`); an SI context is
/// available through [`OpticalContext::from_wavelength`].
#[derive(Debug, Clone, Copy)]
pub struct OpticalContext {
    omega: f64,
    c: f64,
    eta: f64,
    ly_t_product: f64,
}

impl Default for OpticalContext {
    fn default() -> Self {
        Self::dimensionless()
    }
}

impl OpticalContext {
    /// Wavelength-units context: `lambda = 1`, `c = 1`, `eta = 1`.
    pub fn dimensionless() -> Self {
        Self {
            omega: 2.0 * std::f64::consts::PI,
            c: 1.0,
            eta: 1.0,
            ly_t_product: 1.0,
        }
    }

    pub fn new(omega: f64, c: f64, eta: f64, ly_t_product: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Construction(format!(
                "angular frequency must be positive, got {omega}"
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Construction(format!(
                "speed of light must be positive, got {c}"
            )));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Construction(format!(
                "intensity scale eta must be positive, got {eta}"
            )));
        }
        if !(ly_t_product > 0.0 && ly_t_product.is_finite()) {
            return Err(Error::Construction(format!(
                "normalization product L_y*T must be positive, got {ly_t_product}"
            )));
        }
        Ok(Self {
            omega,
            c,
            eta,
            ly_t_product,
        })
    }

    /// SI-style context from a free-space wavelength in meters.
    pub fn from_wavelength(lambda: f64, eta: f64) -> Result<Self> {
        const C: f64 = 299_792_458.0;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Construction(format!(
                "wavelength must be positive, got {lambda}"
            )));
        }
        Self::new(2.0 * std::f64::consts::PI * C / lambda, C, eta, 1.0)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Construction(format!(
                "intensity scale eta must be positive, got {eta}"
            )));
        }
        self.eta = eta;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn speed_of_light(&self) -> f64 {
        self.c
    }

    /// Free-space wavelength `2 pi c / omega`; exact by construction.
    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.c / self.omega
    }

    /// One-photon intensity-per-length scale.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Stored for bookkeeping only; `eta` is an independent input here.
    pub fn ly_t_product(&self) -> f64 {
        self.ly_t_product
    }

    /// Hard support boundary `omega / c` for transverse momenta.
    pub fn kappa_max(&self) -> f64 {
        self.omega / self.c
    }

    /// Dimensionless numerical aperture `c kappa / omega`.
    pub fn numerical_aperture(&self, kappa: f64) -> f64 {
        kappa / self.kappa_max()
    }
}

/// `gamma(kappa) = (1 - c^2 kappa^2 / omega^2)^(-1/4)`.
///
/// Evaluated directly up to the support edge; integrals that reach the edge
/// should use the edge-clustered quadrature in [`crate::numerics`].
pub fn geometric_factor(kappa: f64, ctx: &OpticalContext) -> Result<f64> {
    let na = ctx.numerical_aperture(kappa);
    if na.abs() >= 1.0 {
        return Err(Error::EvanescentMode {
            kappa,
            kappa_max: ctx.kappa_max(),
        });
    }
    // Factored form keeps full precision near the support edge.
    Ok(1.0 / ((1.0 - na) * (1.0 + na)).sqrt().sqrt())
}

/// Rotate a propagating mode by `theta` in the propagation plane.
///
/// Returns the rotated transverse momentum and the amplitude rescaling
/// `sqrt(k_z'/k_z)` that keeps the mode commutator canonical. The identity
/// `gamma(kappa)/gamma(kappa') = sqrt(k_z'/k_z)` holds for every admissible
/// rotation.
pub fn rotate_mode(kappa: f64, theta: f64, ctx: &OpticalContext) -> Result<(f64, f64)> {
    let kappa_max = ctx.kappa_max();
    if kappa.abs() >= kappa_max {
        return Err(Error::EvanescentMode { kappa, kappa_max });
    }
    let kz = ((kappa_max - kappa) * (kappa_max + kappa)).sqrt();
    let (sin_t, cos_t) = theta.sin_cos();
    let kappa_rot = kappa * cos_t - kz * sin_t;
    let kz_rot = kappa * sin_t + kz * cos_t;
    if kz_rot <= 0.0 {
        return Err(Error::BackwardRotation { kz_rot });
    }
    Ok((kappa_rot, (kz_rot / kz).sqrt()))
}

/// Universal ceiling `N! (pi eta / lambda)^N` on the N-photon absorption
/// rate of any N-photon state.
pub fn schwarz_bound_density(ctx: &OpticalContext, n_photons: usize) -> Result<f64> {
    if n_photons == 0 {
        return Err(Error::InvalidArgument(
            "the rate bound is defined for at least one photon".into(),
        ));
    }
    let per_photon = std::f64::consts::PI * ctx.eta() / ctx.wavelength();
    Ok(factorial(n_photons) * per_photon.powi(n_photons as i32))
}

/// `n!` as a float; exact through `n = 22`.
pub fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}
