//! Spatial multiphoton amplitudes `psi(x_1, ..., x_N)` from momentum
//! amplitudes.
//!
//! The full non-paraxial transform weights every momentum with the geometric
//! factor and integrates over the propagating window; the paraxial transform
//! is a plain N-dimensional Fourier transform with the `e^{+i kappa x}`
//! forward kernel and symmetric `(2 pi)^(-1/2)` factors. Catalog states have
//! structure-exploiting fast paths valid at any photon number; a tensor
//! quadrature route (up to N = 3) serves as the independent oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{geometric_factor, OpticalContext};
use crate::numerics::{integrate_1d, integrate_nd, QuadratureSpec, MIN_SAMPLES_PER_FRINGE};
use crate::states::{GridAmplitude, ModeSpectrum, MomentumAmplitude, Variant};

/// Whether the geometric factor is kept (`NonParaxial`) or replaced by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Paraxial,
    NonParaxial,
}

/// A request for `psi` at one configuration of photon positions.
#[derive(Debug, Clone)]
pub struct SpatialAmplitudeRequest<'a> {
    pub amp: &'a MomentumAmplitude,
    pub points: Vec<f64>,
    pub regime: Regime,
    pub quad: QuadratureSpec,
}

/// Beam envelope
/// `F(x) = (2 pi dk)^(-1/2) int gamma(kappa - kappa0) f(kappa/dk) e^{i kappa x} dkappa`,
/// with `gamma = 1` in the paraxial regime.
pub fn beam_envelope(
    mode: &ModeSpectrum,
    x: f64,
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let dk = mode.delta_kappa();
    let k0 = mode.kappa0();
    let (q_lo, q_hi) = mode.shape().q_support();
    let (lo, hi) = (q_lo * dk, q_hi * dk);
    let norm = 1.0 / (2.0 * std::f64::consts::PI * dk).sqrt();
    let shape = mode.shape();
    let (value, _) = match regime {
        Regime::Paraxial => integrate_1d(
            |k| Complex64::from_polar(shape.evaluate(k / dk), k * x),
            (lo, hi),
            quad,
        )?,
        Regime::NonParaxial => {
            let km = ctx.kappa_max();
            let (win_lo, win_hi) = (k0 - km, k0 + km);
            if lo <= win_lo || hi >= win_hi {
                return Err(Error::ModeOutsideLightCone {
                    lo,
                    hi,
                    win_lo,
                    win_hi,
                });
            }
            integrate_1d(
                |k| {
                    let g = geometric_factor(k - k0, ctx).expect("window checked above");
                    Complex64::from_polar(g * shape.evaluate(k / dk), k * x)
                },
                (lo, hi),
                quad,
            )?
        }
    };
    Ok(value * norm)
}

/// One-photon spatial amplitude of the symmetric two-beam superposition,
/// `(1/sqrt(2)) [F(x) e^{-i kappa0 x} + F(-x) e^{+i kappa0 x}]`.
pub fn one_photon_spatial(
    mode: &ModeSpectrum,
    x: f64,
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let k0 = mode.kappa0();
    let f_pos = beam_envelope(mode, x, regime, ctx, quad)?;
    let f_neg = beam_envelope(mode, -x, regime, ctx, quad)?;
    Ok(
        (f_pos * Complex64::from_polar(1.0, -k0 * x) + f_neg * Complex64::from_polar(1.0, k0 * x))
            / 2.0_f64.sqrt(),
    )
}

/// `psi(x_1, ..., x_N)` through the structure of the state.
///
/// Classical products factorize into one-photon transforms, NOON states into
/// two envelope products, and the paraxial jointly Gaussian state is fully
/// closed-form, so these paths work at any photon number. Grid amplitudes use
/// the discrete transform; anything else falls back to tensor quadrature.
pub fn spatial_amplitude(req: &SpatialAmplitudeRequest, ctx: &OpticalContext) -> Result<Complex64> {
    let amp = req.amp;
    let n = amp.n_photons();
    if req.points.len() != n {
        return Err(Error::InvalidArgument(format!(
            "amplitude takes {} positions, got {}",
            n,
            req.points.len()
        )));
    }
    let xs = &req.points;
    match amp.variant() {
        Variant::ClassicalProduct(mode) => {
            let mut prod = Complex64::new(1.0, 0.0);
            for &x in xs {
                prod *= one_photon_spatial(mode, x, req.regime, ctx, &req.quad)?;
            }
            Ok(prod)
        }
        Variant::Noon(mode) => {
            let k0 = mode.kappa0();
            let sum_x: f64 = xs.iter().sum();
            let mut prod_pos = Complex64::new(1.0, 0.0);
            let mut prod_neg = Complex64::new(1.0, 0.0);
            for &x in xs {
                prod_pos *= beam_envelope(mode, x, req.regime, ctx, &req.quad)?;
                prod_neg *= beam_envelope(mode, -x, req.regime, ctx, &req.quad)?;
            }
            Ok((prod_pos * Complex64::from_polar(1.0, -k0 * sum_x)
                + prod_neg * Complex64::from_polar(1.0, k0 * sum_x))
                / 2.0_f64.sqrt())
        }
        Variant::JointlyGaussian(p) => match req.regime {
            Regime::Paraxial => {
                // psi = sqrt(C) 2^(N/2) B beta^(N-1) exp(-x' Sigma_k x) with
                // Sigma_k = beta^2 I + (B^2 - beta^2/N) J.
                let nf = n as f64;
                let b = p.b_param();
                let beta = if n == 1 { b } else { p.beta_param() };
                let sum: f64 = xs.iter().sum();
                let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
                let quad_form = if n == 1 {
                    b * b * sum_sq
                } else {
                    beta * beta * sum_sq + (b * b - beta * beta / nf) * sum * sum
                };
                Ok(Complex64::new(
                    p.normalization_constant().sqrt()
                        * 2.0_f64.powf(nf / 2.0)
                        * b
                        * p.beta_param().powi(n as i32 - 1)
                        * (-quad_form).exp(),
                    0.0,
                ))
            }
            Regime::NonParaxial => {
                spatial_amplitude_quadrature(amp, xs, req.regime, ctx, &req.quad)
            }
        },
        Variant::BiphotonSlit(e) => match req.regime {
            Regime::Paraxial => Ok(e.near_field(xs[0], xs[1])),
            Regime::NonParaxial => Err(Error::Capability(
                "the double-slit state is defined in the paraxial regime".into(),
            )),
        },
        Variant::CustomGrid(grid) => grid_spatial(grid, xs, req.regime, ctx),
    }
}

/// Brute-force tensor quadrature of the transform (N <= 3); the oracle
/// against which fast paths are validated.
pub fn spatial_amplitude_quadrature(
    amp: &MomentumAmplitude,
    points: &[f64],
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let n = amp.n_photons();
    if points.len() != n {
        return Err(Error::InvalidArgument(format!(
            "amplitude takes {} positions, got {}",
            n,
            points.len()
        )));
    }
    if n > 3 {
        return Err(Error::Capability(format!(
            "tensor quadrature of psi supports at most 3 photons, requested {n}; \
             use the diagonal fast path or Monte Carlo"
        )));
    }
    let (mut lo, mut hi) = amp.effective_support();
    let mut spec = quad.clone();
    if regime == Regime::NonParaxial {
        let km = ctx.kappa_max();
        let margin = 1e-9 * km;
        if lo <= -km + margin || hi >= km - margin {
            // support reaches the cone edge: clip and cluster nodes there
            lo = lo.max(-km);
            hi = hi.min(km);
            spec.edge_clustering = true;
        }
    }
    let boxes = vec![(lo, hi); n];
    let norm = (2.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0);
    let points = points.to_vec();
    let (value, _) = integrate_nd(
        |kappas| {
            let phi = amp.evaluate(kappas).expect("dimension fixed");
            let mut weight = Complex64::new(1.0, 0.0);
            let mut phase = 0.0;
            for (k, x) in kappas.iter().zip(&points) {
                phase += k * x;
                if regime == Regime::NonParaxial {
                    match geometric_factor(*k, ctx) {
                        Ok(g) => weight *= g,
                        Err(_) => return Complex64::default(),
                    }
                }
            }
            phi * weight * Complex64::from_polar(1.0, phase)
        },
        &boxes,
        &spec,
    )?;
    Ok(value * norm)
}

/// `psi(x, ..., x)` along the coincidence diagonal.
///
/// NOON and classical states reduce to beam-envelope products; the paraxial
/// jointly Gaussian state reduces to a one-dimensional integral over the
/// total momentum; the double-slit state is already spatial; grids transform
/// discretely.
pub fn diagonal_amplitude(
    amp: &MomentumAmplitude,
    x: f64,
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let n = amp.n_photons();
    match amp.variant() {
        Variant::Noon(mode) => {
            let k0 = mode.kappa0();
            let f_pos = beam_envelope(mode, x, regime, ctx, quad)?;
            let f_neg = beam_envelope(mode, -x, regime, ctx, quad)?;
            let nf = n as f64;
            Ok(
                (f_pos.powi(n as i32) * Complex64::from_polar(1.0, -nf * k0 * x)
                    + f_neg.powi(n as i32) * Complex64::from_polar(1.0, nf * k0 * x))
                    / 2.0_f64.sqrt(),
            )
        }
        Variant::ClassicalProduct(mode) => {
            Ok(one_photon_spatial(mode, x, regime, ctx, quad)?.powi(n as i32))
        }
        Variant::JointlyGaussian(p) => match regime {
            Regime::Paraxial => {
                // Reduce over the relative momenta in closed form and keep a
                // live 1D integral over the total momentum K.
                let nf = n as f64;
                let b = p.b_param();
                let beta = p.beta_param();
                let rel_integral = if n == 1 {
                    1.0
                } else {
                    (4.0 * std::f64::consts::PI * beta * beta).powf((nf - 1.0) / 2.0) / nf.sqrt()
                };
                let reach = 13.0 * b;
                let (k_int, _) = integrate_1d(
                    |k| Complex64::from_polar((-k * k / (4.0 * b * b)).exp(), nf * k * x),
                    (-reach, reach),
                    quad,
                )?;
                let norm = (2.0 * std::f64::consts::PI).powf(-nf / 2.0)
                    * nf.sqrt()
                    * p.normalization_constant().sqrt()
                    * rel_integral;
                Ok(k_int * norm)
            }
            Regime::NonParaxial => {
                let points = vec![x; n];
                spatial_amplitude_quadrature(amp, &points, regime, ctx, quad)
            }
        },
        Variant::BiphotonSlit(e) => match regime {
            Regime::Paraxial => Ok(e.near_field(x, x)),
            Regime::NonParaxial => Err(Error::Capability(
                "the double-slit state is defined in the paraxial regime".into(),
            )),
        },
        Variant::CustomGrid(grid) => grid_spatial(grid, &vec![x; n], regime, ctx),
    }
}

/// Discrete transform of a grid amplitude with trapezoidal weights, checked
/// against the sampling rule of [`MIN_SAMPLES_PER_FRINGE`] points per
/// oscillation at the largest requested position.
fn grid_spatial(
    grid: &GridAmplitude,
    points: &[f64],
    regime: Regime,
    ctx: &OpticalContext,
) -> Result<Complex64> {
    let dim = grid.n_dims();
    for (d, ax) in grid.axes().iter().enumerate() {
        let x_max = points[d].abs();
        if x_max > 0.0 {
            let fringe = 2.0 * std::f64::consts::PI / x_max;
            let required = fringe / MIN_SAMPLES_PER_FRINGE as f64;
            if ax.spacing() > required {
                return Err(Error::UnderResolved {
                    spacing: ax.spacing(),
                    required_spacing: required,
                    feature: fringe,
                    points_per_feature: MIN_SAMPLES_PER_FRINGE,
                });
            }
        }
        if regime == Regime::NonParaxial && (ax.lo <= -ctx.kappa_max() || ax.hi >= ctx.kappa_max())
        {
            return Err(Error::ModeOutsideLightCone {
                lo: ax.lo,
                hi: ax.hi,
                win_lo: -ctx.kappa_max(),
                win_hi: ctx.kappa_max(),
            });
        }
    }

    let total = grid.total_points();
    let mut index = vec![0usize; dim];
    let mut sum = Complex64::default();
    for flat in 0..total {
        let mut rem = flat;
        for d in (0..dim).rev() {
            index[d] = rem % grid.axes()[d].points;
            rem /= grid.axes()[d].points;
        }
        let mut weight = 1.0;
        let mut phase = 0.0;
        for d in 0..dim {
            let ax = &grid.axes()[d];
            let edge = index[d] == 0 || index[d] + 1 == ax.points;
            weight *= if edge { 0.5 } else { 1.0 } * ax.spacing();
            let kappa = ax.node(index[d]);
            phase += kappa * points[d];
            if regime == Regime::NonParaxial {
                weight *= geometric_factor(kappa, ctx).expect("window checked above");
            }
        }
        sum += grid.values()[flat] * weight * Complex64::from_polar(1.0, phase);
    }
    Ok(sum * (2.0 * std::f64::consts::PI).powf(-(dim as f64) / 2.0))
}
