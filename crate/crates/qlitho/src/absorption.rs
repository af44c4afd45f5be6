//! N-photon absorption rates and sampled patterns.
//!
//! The rate at coincident positions is `N! eta^N |psi(x, ..., x)|^2`; sampled
//! patterns carry their scenario metadata, serialize to CSV with a JSON
//! sidecar, and are checked against the universal rate ceiling
//! `N! (pi eta / lambda)^N` on construction. Fringe metrics and the
//! discrete-absorber bin model live here too.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{factorial, schwarz_bound_density, OpticalContext};
use crate::numerics::{integrate_nd, QuadratureSpec};
use crate::propagate::{diagonal_amplitude, spatial_amplitude, Regime, SpatialAmplitudeRequest};
use crate::states::{MomentumAmplitude, Variant};

/// Slack on the rate ceiling to absorb quadrature round-off.
pub const BOUND_SLACK: f64 = 1e-9;
/// Minimum scan points per fringe period.
pub const MIN_POINTS_PER_PERIOD: usize = 8;

/// What a scan's values mean physically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    /// `<:I^N(x):>` absorption rates; subject to the universal ceiling.
    Rate,
    /// Discrete-absorber probability densities `P(x)`; same grid machinery,
    /// different units, so the rate ceiling does not apply.
    AbsorberDensity,
}

/// A sampled one-dimensional pattern.
#[derive(Debug, Clone)]
pub struct PatternScan {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub n_photons: usize,
    pub state_label: String,
    pub eta_used: f64,
    pub kind: ScanKind,
    pub metadata: BTreeMap<String, String>,
}

impl PatternScan {
    /// Uniform spacing of the grid.
    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn peak(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nonnegativity, finiteness, and (for rate scans) the ceiling check.
    pub fn validate(&self, ctx: &OpticalContext) -> Result<()> {
        for (&x, &v) in self.grid.iter().zip(&self.values) {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "pattern value {v} at x = {x} is not a finite nonnegative rate"
                )));
            }
        }
        if self.kind == ScanKind::Rate {
            let bound = schwarz_bound_density(ctx, self.n_photons)?;
            let max = self.peak();
            if max > bound * (1.0 + BOUND_SLACK) {
                return Err(Error::BoundViolation {
                    value: max,
                    bound,
                    label: self.state_label.clone(),
                });
            }
        }
        Ok(())
    }

    /// Two-column CSV (`x,rate`).
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        writeln!(file, "x,rate")?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            writeln!(file, "{x:.12e},{v:.12e}")?;
        }
        Ok(())
    }

    /// JSON sidecar with the scan's provenance and metadata.
    pub fn write_sidecar(&self, path: &Path) -> Result<()> {
        let mut meta = serde_json::Map::new();
        meta.insert("n_photons".into(), self.n_photons.into());
        meta.insert("state".into(), self.state_label.clone().into());
        meta.insert("eta".into(), self.eta_used.into());
        meta.insert(
            "kind".into(),
            match self.kind {
                ScanKind::Rate => "rate",
                ScanKind::AbsorberDensity => "absorber_density",
            }
            .into(),
        );
        meta.insert("points".into(), self.grid.len().into());
        meta.insert("x_start".into(), self.grid[0].into());
        meta.insert("x_step".into(), self.spacing().into());
        let params: serde_json::Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        meta.insert("parameters".into(), serde_json::Value::Object(params));
        let text = serde_json::to_string_pretty(&serde_json::Value::Object(meta))
            .expect("static structure serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// `<:I^N(x):> = N! eta^N |psi(x, ..., x)|^2`.
pub fn absorption_rate_at(
    amp: &MomentumAmplitude,
    x: f64,
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let psi = diagonal_amplitude(amp, x, regime, ctx, quad)?;
    Ok(factorial(amp.n_photons()) * ctx.eta().powi(amp.n_photons() as i32) * psi.norm_sqr())
}

/// Expected fringe period of the state's diagonal pattern, if it has one.
pub fn expected_fringe_period(amp: &MomentumAmplitude) -> Option<f64> {
    match amp.variant() {
        Variant::Noon(mode) if mode.kappa0() != 0.0 => {
            Some(std::f64::consts::PI / (amp.n_photons() as f64 * mode.kappa0().abs()))
        }
        Variant::ClassicalProduct(mode) if mode.kappa0() != 0.0 => {
            Some(std::f64::consts::PI / mode.kappa0().abs())
        }
        _ => None,
    }
}

fn check_uniform_grid(grid: &[f64]) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument(
            "pattern grid needs at least two points".into(),
        ));
    }
    let spacing = grid[1] - grid[0];
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument(
            "pattern grid must be strictly increasing".into(),
        ));
    }
    for w in grid.windows(2) {
        let step = w[1] - w[0];
        if (step - spacing).abs() > 1e-9 * spacing {
            return Err(Error::InvalidArgument(format!(
                "pattern grid is not uniform: step {step} vs {spacing}"
            )));
        }
    }
    Ok(spacing)
}

/// Sample the absorption rate over a uniform grid.
///
/// Fringed states must be sampled with at least [`MIN_POINTS_PER_PERIOD`]
/// points per expected period; the error carries the largest admissible
/// spacing as the density hint.
pub fn absorption_pattern(
    amp: &MomentumAmplitude,
    grid: &[f64],
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<PatternScan> {
    let spacing = check_uniform_grid(grid)?;
    if let Some(period) = expected_fringe_period(amp) {
        let required = period / MIN_POINTS_PER_PERIOD as f64;
        if spacing > required {
            return Err(Error::UnderResolved {
                spacing,
                required_spacing: required,
                feature: period,
                points_per_feature: MIN_POINTS_PER_PERIOD,
            });
        }
    }
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        values.push(absorption_rate_at(amp, x, regime, ctx, quad)?);
    }
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "regime".into(),
        match regime {
            Regime::Paraxial => "paraxial".into(),
            Regime::NonParaxial => "nonparaxial".into(),
        },
    );
    let scan = PatternScan {
        grid: grid.to_vec(),
        values,
        n_photons: amp.n_photons(),
        state_label: amp.label(),
        eta_used: ctx.eta(),
        kind: ScanKind::Rate,
        metadata,
    };
    scan.validate(ctx)?;
    Ok(scan)
}

/// Period, peak, and central-period visibility of a sampled pattern.
#[derive(Debug, Clone, Copy)]
pub struct FringeMetrics {
    /// Mean refined peak-to-peak spacing; absent for non-oscillatory scans.
    pub period: Option<f64>,
    pub peak: f64,
    /// `(max - min)/(max + min)` over one period around the central maximum;
    /// absent when no period was found.
    pub visibility: Option<f64>,
}

/// Estimate fringe metrics from a scan.
///
/// Local maxima are refined by a quadratic fit through the neighboring
/// samples; at least three maxima are needed before a period is reported.
pub fn fringe_metrics(scan: &PatternScan) -> FringeMetrics {
    let peak = scan.peak();
    let v = &scan.values;
    let dx = scan.spacing();
    let floor = 1e-3 * peak;
    let mut maxima = Vec::new();
    for i in 1..v.len() - 1 {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > floor {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let offset = if denom != 0.0 {
                0.5 * (v[i - 1] - v[i + 1]) / denom
            } else {
                0.0
            };
            maxima.push(scan.grid[i] + offset.clamp(-0.5, 0.5) * dx);
        }
    }
    if maxima.len() < 3 {
        return FringeMetrics {
            period: None,
            peak,
            visibility: None,
        };
    }
    let period = (maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64;

    // visibility over one period around the maximum nearest the scan center
    let center = 0.5 * (scan.grid[0] + scan.grid[scan.grid.len() - 1]);
    let central = maxima
        .iter()
        .copied()
        .min_by(|a, b| (a - center).abs().total_cmp(&(b - center).abs()))
        .expect("at least three maxima");
    let (win_lo, win_hi) = (central - 0.5 * period, central + 0.5 * period);
    let mut w_max = f64::NEG_INFINITY;
    let mut w_min = f64::INFINITY;
    for (&x, &val) in scan.grid.iter().zip(v) {
        if x >= win_lo && x <= win_hi {
            w_max = w_max.max(val);
            w_min = w_min.min(val);
        }
    }
    let visibility = if w_max > 0.0 {
        Some((w_max - w_min) / (w_max + w_min))
    } else {
        None
    };
    FringeMetrics {
        period: Some(period),
        peak,
        visibility,
    }
}

/// Discrete-absorber bin model: the probability density of an N-photon
/// absorption event at an absorber of width `absorber_width` centered on each
/// grid point,
/// `P(xi) = (1/dxi) int_box |psi(x_1, ..., x_N)|^2 dx`,
/// which approaches `dxi^(N-1) |psi(xi, ..., xi)|^2` as the width shrinks.
pub fn discrete_absorber_pattern(
    amp: &MomentumAmplitude,
    absorber_width: f64,
    grid: &[f64],
    regime: Regime,
    ctx: &OpticalContext,
    quad: &QuadratureSpec,
) -> Result<PatternScan> {
    if !(absorber_width > 0.0 && absorber_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "absorber width must be positive, got {absorber_width}"
        )));
    }
    if regime != Regime::Paraxial {
        return Err(Error::InvalidArgument(
            "the absorber bin model reads |psi|^2 as a configuration-space \
             probability density, which is a paraxial-regime concept"
                .into(),
        ));
    }
    let n = amp.n_photons();
    if n > 3 {
        return Err(Error::Capability(format!(
            "exact bin integrals support at most 3 photons, requested {n}"
        )));
    }
    check_uniform_grid(grid)?;

    let mut values = Vec::with_capacity(grid.len());
    for &xi in grid {
        let half = 0.5 * absorber_width;
        let boxes = vec![(xi - half, xi + half); n];
        let (bin, _) = integrate_nd(
            |xs| {
                let psi = spatial_amplitude(
                    &SpatialAmplitudeRequest {
                        amp,
                        points: xs.to_vec(),
                        regime,
                        quad: quad.clone(),
                    },
                    ctx,
                )
                .expect("validated request");
                Complex64::new(psi.norm_sqr(), 0.0)
            },
            &boxes,
            quad,
        )?;
        values.push(bin.re / absorber_width);
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("absorber_width".into(), format!("{absorber_width:.12e}"));
    metadata.insert("regime".into(), "paraxial".into());
    let scan = PatternScan {
        grid: grid.to_vec(),
        values,
        n_photons: n,
        state_label: amp.label(),
        eta_used: ctx.eta(),
        kind: ScanKind::AbsorberDensity,
        metadata,
    };
    scan.validate(ctx)?;
    Ok(scan)
}

/// Convenience: a uniform grid of `points` positions covering
/// `[-half_width, half_width]`.
pub fn symmetric_grid(half_width: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "a grid needs at least two points");
    let step = 2.0 * half_width / (points - 1) as f64;
    (0..points).map(|i| -half_width + step * i as f64).collect()
}
