//! Continuous-convention Fourier transforms of uniformly sampled data.
//!
//! The kernel is `(2 pi)^(-1/2) int f(kappa) e^{i kappa x} dkappa`, discretized
//! with trapezoidal end weights. Target points are arbitrary, so phase factors
//! are exact rather than tied to an FFT-conjugate grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum samples per oscillation of `e^{i kappa x}` at the largest target.
pub const MIN_SAMPLES_PER_FRINGE: usize = 8;

/// Transform uniform samples `f(kappa_0 + j * spacing)` to the target points.
pub fn grid_fourier(
    samples: &[Complex64],
    kappa_start: f64,
    spacing: f64,
    targets: &[f64],
) -> Result<Vec<Complex64>> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument(
            "grid_fourier needs at least two samples".into(),
        ));
    }
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sample spacing must be positive, got {spacing}"
        )));
    }
    let x_max = targets.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if x_max > 0.0 {
        let fringe = 2.0 * PI / x_max;
        let required = fringe / MIN_SAMPLES_PER_FRINGE as f64;
        if spacing > required {
            return Err(Error::UnderResolved {
                spacing,
                required_spacing: required,
                feature: fringe,
                points_per_feature: MIN_SAMPLES_PER_FRINGE,
            });
        }
    }

    let norm = spacing / (2.0 * PI).sqrt();
    let mut out = Vec::with_capacity(targets.len());
    for &x in targets {
        let mut acc = Complex64::default();
        for (j, &s) in samples.iter().enumerate() {
            let w = if j == 0 || j + 1 == samples.len() {
                0.5
            } else {
                1.0
            };
            let kappa = kappa_start + spacing * j as f64;
            acc += s * w * Complex64::from_polar(1.0, kappa * x);
        }
        out.push(acc * norm);
    }
    Ok(out)
}

/// `(2 pi)^(-1/2) int f e^{i kappa x}` of the unit-normalized Gaussian
/// `pi^(-1/4) exp(-q^2/2)`; used as the analytic self-transform reference.
pub fn gaussian_self_transform(x: f64) -> f64 {
    PI.powf(-0.25) * (-0.5 * x * x).exp()
}

/// Analytic transform of the unit rect (height 1 on `|q| <= 1/2`):
/// `(2 pi)^(-1/2) sinc(x/2)` with `sinc(u) = sin(u)/u`.
pub fn rect_transform(x: f64) -> f64 {
    let sinc = if x == 0.0 {
        1.0
    } else {
        (0.5 * x).sin() / (0.5 * x)
    };
    sinc / (2.0 * PI).sqrt()
}
