//! Biphoton double-slit model: a momentum-anticorrelated photon pair passes
//! through two slits, producing a spatial-domain NOON state whose far-field
//! angular coincidence pattern carries doubled fringes.
//!
//! The pair correlation `delta(x1 - x2)` of the idealized analysis is
//! replaced by a sharp normalizable function `g((x1-x2)/alpha)` of the
//! coherence length `alpha`, so all amplitudes here are square-normalized and
//! the coincidence rate is finite and linear in `alpha`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::OpticalContext;
use crate::numerics::{integrate_1d, QuadratureSpec};

/// Shape of the pair-correlation function `g` (unit-normalized in `q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationShape {
    /// `pi^(-1/4) exp(-q^2/2)`
    Gaussian,
    /// height 1 on `|q| <= 1/2`
    Rect,
}

impl CorrelationShape {
    pub fn evaluate(&self, q: f64) -> f64 {
        match self {
            Self::Gaussian => PI.powf(-0.25) * (-0.5 * q * q).exp(),
            Self::Rect => {
                if q.abs() <= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Dimensionless transform `G(p) = (2 pi)^(-1/2) int g(q) e^{-i p q} dq`.
    pub fn transform(&self, p: f64) -> f64 {
        match self {
            Self::Gaussian => PI.powf(-0.25) * (-0.5 * p * p).exp(),
            Self::Rect => {
                let sinc = if p == 0.0 {
                    1.0
                } else {
                    (0.5 * p).sin() / (0.5 * p)
                };
                sinc / (2.0 * PI).sqrt()
            }
        }
    }

    /// Effective support of `g` in the dimensionless argument.
    pub fn q_support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian => (-8.75, 8.75),
            Self::Rect => (-0.5, 0.5),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Rect => "rect",
        }
    }
}

/// Geometry and source parameters of the two-slit biphoton experiment.
#[derive(Debug, Clone, Copy)]
pub struct SlitExperiment {
    slit_width: f64,
    slit_spacing: f64,
    coherence_length: f64,
    epsilon: f64,
    corr_shape: CorrelationShape,
    ctx: OpticalContext,
}

impl SlitExperiment {
    pub fn new(
        slit_width: f64,
        slit_spacing: f64,
        coherence_length: f64,
        epsilon: f64,
        corr_shape: CorrelationShape,
        ctx: OpticalContext,
    ) -> Result<Self> {
        if !(slit_width > 0.0 && slit_width.is_finite()) {
            return Err(Error::Construction(format!(
                "slit width must be positive, got {slit_width}"
            )));
        }
        if !(slit_spacing > 0.0 && slit_spacing.is_finite()) {
            return Err(Error::Construction(format!(
                "slit spacing must be positive, got {slit_spacing}"
            )));
        }
        if slit_spacing <= slit_width {
            // Overlapping slits would break the two-slit normalization.
            return Err(Error::Construction(format!(
                "slit spacing {slit_spacing} must exceed the slit width {slit_width}"
            )));
        }
        if !(coherence_length > 0.0 && coherence_length.is_finite()) {
            return Err(Error::Construction(format!(
                "coherence length must be positive, got {coherence_length}"
            )));
        }
        if !(epsilon.is_finite() && epsilon * epsilon <= 1.0) {
            return Err(Error::Construction(format!(
                "pair amplitude epsilon must satisfy |epsilon|^2 <= 1, got {epsilon}"
            )));
        }
        if coherence_length > slit_width / 10.0 {
            log::warn!(
                "coherence length {coherence_length} above a/10 = {}; the sharp-correlation \
                 reading of the pattern degrades",
                slit_width / 10.0
            );
        }
        Ok(Self {
            slit_width,
            slit_spacing,
            coherence_length,
            epsilon,
            corr_shape,
            ctx,
        })
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn slit_spacing(&self) -> f64 {
        self.slit_spacing
    }

    pub fn coherence_length(&self) -> f64 {
        self.coherence_length
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn corr_shape(&self) -> CorrelationShape {
        self.corr_shape
    }

    pub fn context(&self) -> &OpticalContext {
        &self.ctx
    }

    pub fn with_coherence_length(&self, alpha: f64) -> Result<Self> {
        Self::new(
            self.slit_width,
            self.slit_spacing,
            alpha,
            self.epsilon,
            self.corr_shape,
            self.ctx,
        )
    }

    /// Near-field pair amplitude
    /// `(2 alpha a)^(-1/2) g((x1-x2)/alpha) [rect((x1+x2-b)/2a) + rect((x1+x2+b)/2a)]`.
    pub fn near_field(&self, x1: f64, x2: f64) -> Complex64 {
        let a = self.slit_width;
        let b = self.slit_spacing;
        let alpha = self.coherence_length;
        let g = self.corr_shape.evaluate((x1 - x2) / alpha);
        let u = x1 + x2;
        let slits = rect((u - b) / (2.0 * a)) + rect((u + b) / (2.0 * a));
        Complex64::new(g * slits / (2.0 * alpha * a).sqrt(), 0.0)
    }

    /// Momentum pair amplitude
    /// `sqrt(alpha a / pi) G(alpha(k1-k2)/2) sinc(a(k1+k2)/2) cos(b(k1+k2)/2)`.
    ///
    /// The constant is fixed by `int |phi|^2 = 1`, equivalently by exact
    /// Fourier duality with [`Self::near_field`].
    pub fn momentum(&self, k1: f64, k2: f64) -> Complex64 {
        let a = self.slit_width;
        let b = self.slit_spacing;
        let alpha = self.coherence_length;
        let s = 0.5 * (k1 + k2);
        let d = 0.5 * (k1 - k2);
        let value = (alpha * a / PI).sqrt()
            * self.corr_shape.transform(alpha * d)
            * sinc(a * s)
            * (b * s).cos();
        Complex64::new(value, 0.0)
    }

    /// Numerical Fourier transform of the near field, separated exactly in
    /// the rotated coordinates `(u, v) = (x1 + x2, x1 - x2)` with quadrature
    /// panels split at the slit edges. Independent oracle for
    /// [`Self::momentum`].
    pub fn momentum_numeric(&self, k1: f64, k2: f64, quad: &QuadratureSpec) -> Result<Complex64> {
        let a = self.slit_width;
        let b = self.slit_spacing;
        let alpha = self.coherence_length;
        let s = 0.5 * (k1 + k2);
        let d = 0.5 * (k1 - k2);

        let (q_lo, q_hi) = self.corr_shape.q_support();
        let shape = self.corr_shape;
        let (corr_int, _) = integrate_1d(
            |v| Complex64::from_polar(shape.evaluate(v / alpha), -v * d),
            (alpha * q_lo, alpha * q_hi),
            quad,
        )?;

        let mut slit_int = Complex64::default();
        for center in [-b, b] {
            let (part, _) = integrate_1d(
                |u| Complex64::from_polar(1.0, -u * s),
                (center - a, center + a),
                quad,
            )?;
            slit_int += part;
        }

        Ok(corr_int * slit_int / (4.0 * PI * (2.0 * alpha * a).sqrt()))
    }

    /// Far-field angular coincidence rate at detection angle `theta`:
    /// `|epsilon|^2 |phi(2 pi theta / lambda, 2 pi theta / lambda)|^2`
    /// with the overall proportionality constant fixed to one.
    pub fn angular_coincidence(&self, theta: f64) -> f64 {
        let kappa = 2.0 * PI * theta / self.ctx.wavelength();
        let phi = self.momentum(kappa, kappa);
        self.epsilon * self.epsilon * phi.norm_sqr()
    }

    /// Same rate through the numerical-transform pipeline.
    pub fn angular_coincidence_numeric(&self, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
        let kappa = 2.0 * PI * theta / self.ctx.wavelength();
        let phi = self.momentum_numeric(kappa, kappa, quad)?;
        Ok(self.epsilon * self.epsilon * phi.norm_sqr())
    }

    /// Squared-amplitude normalization of the near field, via the exact
    /// `(u, v)` separation (the Jacobian of the rotation is 1/2).
    pub fn near_field_normalization(&self, quad: &QuadratureSpec) -> Result<f64> {
        let a = self.slit_width;
        let b = self.slit_spacing;
        let alpha = self.coherence_length;
        let (q_lo, q_hi) = self.corr_shape.q_support();
        let shape = self.corr_shape;
        let (corr, _) = integrate_1d(
            |v| {
                let g = shape.evaluate(v / alpha);
                Complex64::new(g * g, 0.0)
            },
            (alpha * q_lo, alpha * q_hi),
            quad,
        )?;
        let mut slits = Complex64::default();
        for center in [-b, b] {
            let (part, _) = integrate_1d(
                |u| {
                    let r = rect((u - b) / (2.0 * a)) + rect((u + b) / (2.0 * a));
                    Complex64::new(r * r, 0.0)
                },
                (center - a, center + a),
                quad,
            )?;
            slits += part;
        }
        Ok(0.5 * corr.re * slits.re / (2.0 * alpha * a))
    }
}

/// Coincidence rate versus coherence length at a fixed detection angle.
pub fn alpha_scan(
    template: &SlitExperiment,
    alphas: &[f64],
    theta: f64,
) -> Result<Vec<(f64, f64)>> {
    alphas
        .iter()
        .map(|&alpha| {
            let exp = template.with_coherence_length(alpha)?;
            Ok((alpha, exp.angular_coincidence(theta)))
        })
        .collect()
}

/// Least-squares slope through the origin and the centered R^2 of the fit.
pub fn linear_fit_through_origin(points: &[(f64, f64)]) -> (f64, f64) {
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mean_y: f64 = points.iter().map(|(_, y)| y).sum::<f64>() / points.len() as f64;
    let ss_res: f64 = points
        .iter()
        .map(|(x, y)| {
            let r = y - slope * x;
            r * r
        })
        .sum();
    let ss_tot: f64 = points
        .iter()
        .map(|(_, y)| {
            let d = y - mean_y;
            d * d
        })
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, r2)
}

fn rect(t: f64) -> f64 {
    if t.abs() <= 0.5 {
        1.0
    } else {
        0.0
    }
}

/// `sin(u)/u` with `sinc(0) = 1` (unnormalized convention; it matches the
/// transform of the unit-height slit aperture).
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}
