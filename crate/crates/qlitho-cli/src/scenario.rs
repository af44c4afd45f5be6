//! Declarative scenario definitions.
//!
//! A scenario file is TOML (or JSON) with a `kind` field selecting the
//! experiment and flat keys for its parameters; every parameter has a
//! default, and the effective values are echoed into the run summary.
//! Validation happens before any computation and reports the complete list
//! of violations.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use qlitho::double_slit::CorrelationShape;
use qlitho::OpticalContext;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    NoonCompare(NoonCompareParams),
    GaussianTradeoff(GaussianTradeoffParams),
    GaussianPattern(GaussianPatternParams),
    DoubleSlitAngular(DoubleSlitAngularParams),
    DoubleSlitAlphaScan(DoubleSlitAlphaScanParams),
    BoundAudit(BoundAuditParams),
    RotationAudit(RotationAuditParams),
    AbsorberConvergence(AbsorberConvergenceParams),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NoonCompare(_) => "noon_compare",
            Self::GaussianTradeoff(_) => "gaussian_tradeoff",
            Self::GaussianPattern(_) => "gaussian_pattern",
            Self::DoubleSlitAngular(_) => "double_slit_angular",
            Self::DoubleSlitAlphaScan(_) => "double_slit_alpha_scan",
            Self::BoundAudit(_) => "bound_audit",
            Self::RotationAudit(_) => "rotation_audit",
            Self::AbsorberConvergence(_) => "absorber_convergence",
        }
    }

    /// Parse a scenario file; the format is chosen by extension
    /// (`.json` is JSON, anything else is TOML).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading scenario file {}", path.display()))?;
        let scenario = if path.extension().and_then(|e| e.to_str()) == Some("json") {
            serde_json::from_str(&text)
                .with_context(|| format!("parsing JSON scenario {}", path.display()))?
        } else {
            toml::from_str(&text)
                .with_context(|| format!("parsing TOML scenario {}", path.display()))?
        };
        Ok(scenario)
    }

    /// Validate every parameter against the owning module's preconditions;
    /// collects all violations before failing.
    pub fn validate(&self) -> Result<()> {
        let violations = match self {
            Self::NoonCompare(p) => p.violations(),
            Self::GaussianTradeoff(p) => p.violations(),
            Self::GaussianPattern(p) => p.violations(),
            Self::DoubleSlitAngular(p) => p.violations(),
            Self::DoubleSlitAlphaScan(p) => p.violations(),
            Self::BoundAudit(p) => p.violations(),
            Self::RotationAudit(p) => p.violations(),
            Self::AbsorberConvergence(p) => p.violations(),
        };
        if violations.is_empty() {
            Ok(())
        } else {
            bail!(
                "invalid scenario parameters:\n  - {}",
                violations.join("\n  - ")
            )
        }
    }

    /// Replace every seed parameter (used by exploratory runs).
    pub fn override_seed(&mut self, seed: u64) {
        match self {
            Self::GaussianPattern(p) => p.seed = seed,
            Self::BoundAudit(p) => p.seed = seed,
            Self::RotationAudit(p) => p.seed = seed,
            _ => {}
        }
    }
}

/// Build the optical context for a scenario: wavelength units by default,
/// SI when a wavelength in meters is given.
pub fn context_from(wavelength: &Option<f64>, eta: f64) -> Result<OpticalContext> {
    let ctx = match wavelength {
        Some(lambda) => OpticalContext::from_wavelength(*lambda, eta)?,
        None => OpticalContext::dimensionless().with_eta(eta)?,
    };
    Ok(ctx)
}

pub fn parse_corr_shape(name: &str) -> Result<CorrelationShape> {
    match name {
        "gaussian" => Ok(CorrelationShape::Gaussian),
        "rect" => Ok(CorrelationShape::Rect),
        other => bail!("unknown correlation shape `{other}` (expected `gaussian` or `rect`)"),
    }
}

fn positive(v: f64, what: &str, out: &mut Vec<String>) {
    if !(v > 0.0 && v.is_finite()) {
        out.push(format!("{what} must be positive and finite, got {v}"));
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct NoonCompareParams {
    /// Photon number N
    #[arg(long, default_value_t = 2)]
    pub n_photons: usize,
    /// Beam tilt kappa0 (1/length)
    #[arg(long, default_value_t = 1.0)]
    pub kappa0: f64,
    /// Mode bandwidth (1/length)
    #[arg(long, default_value_t = 0.05)]
    pub delta_kappa: f64,
    /// Scan half-width (length)
    #[arg(long, default_value_t = 5.0)]
    pub half_width: f64,
    /// Scan points
    #[arg(long, default_value_t = 512)]
    pub grid_points: usize,
    /// One-photon intensity scale
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// SI wavelength in meters (omit for wavelength units)
    #[arg(long)]
    pub wavelength: Option<f64>,
}

impl Default for NoonCompareParams {
    fn default() -> Self {
        Self {
            n_photons: 2,
            kappa0: 1.0,
            delta_kappa: 0.05,
            half_width: 5.0,
            grid_points: 512,
            eta: 1.0,
            wavelength: None,
        }
    }
}

impl NoonCompareParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.n_photons == 0 {
            v.push("n_photons must be at least 1".into());
        }
        positive(self.kappa0, "kappa0", &mut v);
        positive(self.delta_kappa, "delta_kappa", &mut v);
        positive(self.half_width, "half_width", &mut v);
        positive(self.eta, "eta", &mut v);
        if self.grid_points < 16 {
            v.push(format!(
                "grid_points must be at least 16, got {}",
                self.grid_points
            ));
        }
        if self.kappa0 > 0.0 && self.delta_kappa > 0.0 && self.kappa0 / self.delta_kappa < 4.3 {
            v.push(format!(
                "kappa0/delta_kappa = {:.2} leaves the tilted modes overlapping; need >= 4.3",
                self.kappa0 / self.delta_kappa
            ));
        }
        if self.n_photons > 0 && self.kappa0 > 0.0 && self.half_width > 0.0 && self.grid_points > 1
        {
            let spacing = 2.0 * self.half_width / (self.grid_points - 1) as f64;
            let period = std::f64::consts::PI / (self.n_photons as f64 * self.kappa0);
            if spacing > period / 8.0 {
                v.push(format!(
                    "grid spacing {spacing:.3e} under-resolves the fringe period {period:.3e} \
                     (need >= 8 points per period; raise grid_points to at least {})",
                    (16.0 * self.half_width / period).ceil() as usize + 1
                ));
            }
        }
        if let Some(w) = self.wavelength {
            positive(w, "wavelength", &mut v);
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct GaussianTradeoffParams {
    /// Photon numbers to tabulate
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 5, 10])]
    pub n_values: Vec<usize>,
    /// Interior grid points per curve (endpoints are open limits)
    #[arg(long, default_value_t = 99)]
    pub r_points: usize,
    /// Photon number for the zero-spot total-rate limit check
    #[arg(long, default_value_t = 100)]
    pub limit_check_n: usize,
}

impl Default for GaussianTradeoffParams {
    fn default() -> Self {
        Self {
            n_values: vec![2, 3, 5, 10],
            r_points: 99,
            limit_check_n: 100,
        }
    }
}

impl GaussianTradeoffParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.n_values.is_empty() {
            v.push("n_values must not be empty".into());
        }
        for &n in &self.n_values {
            if n < 2 {
                v.push(format!("trade-off curves need N >= 2, got {n}"));
            }
        }
        if self.r_points < 3 {
            v.push(format!(
                "r_points must be at least 3, got {}",
                self.r_points
            ));
        }
        if self.limit_check_n < 2 {
            v.push(format!(
                "limit_check_n must be >= 2, got {}",
                self.limit_check_n
            ));
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct GaussianPatternParams {
    /// Photon number N
    #[arg(long, default_value_t = 2)]
    pub n_photons: usize,
    /// Average-momentum spread B (1/length)
    #[arg(long, default_value_t = 0.5)]
    pub b_param: f64,
    /// Relative-momentum spread beta (1/length)
    #[arg(long, default_value_t = 1.0)]
    pub beta_param: f64,
    /// Scan half-width (length)
    #[arg(long, default_value_t = 2.0)]
    pub half_width: f64,
    /// Scan points
    #[arg(long, default_value_t = 301)]
    pub grid_points: usize,
    /// One-photon intensity scale
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// SI wavelength in meters (omit for wavelength units)
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Monte Carlo seed for the normalization check
    #[arg(long, default_value_t = 20240801)]
    pub seed: u64,
    /// Monte Carlo samples for the normalization check (N > 3)
    #[arg(long, default_value_t = 200_000)]
    pub mc_samples: usize,
}

impl Default for GaussianPatternParams {
    fn default() -> Self {
        Self {
            n_photons: 2,
            b_param: 0.5,
            beta_param: 1.0,
            half_width: 2.0,
            grid_points: 301,
            eta: 1.0,
            wavelength: None,
            seed: 20240801,
            mc_samples: 200_000,
        }
    }
}

impl GaussianPatternParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.n_photons == 0 {
            v.push("n_photons must be at least 1".into());
        }
        positive(self.b_param, "b_param", &mut v);
        positive(self.beta_param, "beta_param", &mut v);
        positive(self.half_width, "half_width", &mut v);
        positive(self.eta, "eta", &mut v);
        if self.grid_points < 16 {
            v.push(format!(
                "grid_points must be at least 16, got {}",
                self.grid_points
            ));
        }
        if self.mc_samples < 1000 {
            v.push(format!(
                "mc_samples must be at least 1000, got {}",
                self.mc_samples
            ));
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct DoubleSlitAngularParams {
    /// Slit width a (length)
    #[arg(long, default_value_t = 4.0)]
    pub slit_width: f64,
    /// Slit spacing b (length)
    #[arg(long, default_value_t = 12.0)]
    pub slit_spacing: f64,
    /// Biphoton coherence length alpha (length)
    #[arg(long, default_value_t = 0.2)]
    pub coherence_length: f64,
    /// Pair-generation amplitude epsilon
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Correlation shape: gaussian | rect
    #[arg(long, default_value = "gaussian")]
    pub corr_shape: String,
    /// Angular scan points
    #[arg(long, default_value_t = 801)]
    pub theta_points: usize,
    /// Scan half-range in units of the first null lambda/(4b)
    #[arg(long, default_value_t = 2.5)]
    pub theta_range_nulls: f64,
    /// SI wavelength in meters (omit for wavelength units)
    #[arg(long)]
    pub wavelength: Option<f64>,
}

impl Default for DoubleSlitAngularParams {
    fn default() -> Self {
        Self {
            slit_width: 4.0,
            slit_spacing: 12.0,
            coherence_length: 0.2,
            epsilon: 0.05,
            corr_shape: "gaussian".into(),
            theta_points: 801,
            theta_range_nulls: 2.5,
            wavelength: None,
        }
    }
}

impl DoubleSlitAngularParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        positive(self.slit_width, "slit_width", &mut v);
        positive(self.slit_spacing, "slit_spacing", &mut v);
        positive(self.coherence_length, "coherence_length", &mut v);
        if self.slit_spacing <= self.slit_width {
            v.push(format!(
                "slit_spacing {} must exceed slit_width {}",
                self.slit_spacing, self.slit_width
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon * self.epsilon <= 1.0) {
            v.push(format!(
                "epsilon must satisfy |epsilon|^2 <= 1, got {}",
                self.epsilon
            ));
        }
        if parse_corr_shape(&self.corr_shape).is_err() {
            v.push(format!("unknown corr_shape `{}`", self.corr_shape));
        }
        if self.theta_points < 64 {
            v.push(format!(
                "theta_points must be at least 64, got {}",
                self.theta_points
            ));
        }
        positive(self.theta_range_nulls, "theta_range_nulls", &mut v);
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct DoubleSlitAlphaScanParams {
    /// Slit width a (length)
    #[arg(long, default_value_t = 4.0)]
    pub slit_width: f64,
    /// Slit spacing b (length)
    #[arg(long, default_value_t = 12.0)]
    pub slit_spacing: f64,
    /// Pair-generation amplitude epsilon
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Correlation shape: gaussian | rect
    #[arg(long, default_value = "gaussian")]
    pub corr_shape: String,
    /// Coherence lengths to scan, in units of the slit width
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0125, 0.025, 0.0375, 0.05, 0.0625, 0.075, 0.0875, 0.1])]
    pub alpha_over_a: Vec<f64>,
    /// Detection angle, in units of the first null lambda/(4b)
    #[arg(long, default_value_t = 0.2)]
    pub theta_in_nulls: f64,
    /// SI wavelength in meters (omit for wavelength units)
    #[arg(long)]
    pub wavelength: Option<f64>,
}

impl Default for DoubleSlitAlphaScanParams {
    fn default() -> Self {
        Self {
            slit_width: 4.0,
            slit_spacing: 12.0,
            epsilon: 0.05,
            corr_shape: "gaussian".into(),
            alpha_over_a: vec![0.0125, 0.025, 0.0375, 0.05, 0.0625, 0.075, 0.0875, 0.1],
            theta_in_nulls: 0.2,
            wavelength: None,
        }
    }
}

impl DoubleSlitAlphaScanParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        positive(self.slit_width, "slit_width", &mut v);
        positive(self.slit_spacing, "slit_spacing", &mut v);
        if self.slit_spacing <= self.slit_width {
            v.push(format!(
                "slit_spacing {} must exceed slit_width {}",
                self.slit_spacing, self.slit_width
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon * self.epsilon <= 1.0) {
            v.push(format!(
                "epsilon must satisfy |epsilon|^2 <= 1, got {}",
                self.epsilon
            ));
        }
        if parse_corr_shape(&self.corr_shape).is_err() {
            v.push(format!("unknown corr_shape `{}`", self.corr_shape));
        }
        if self.alpha_over_a.len() < 3 {
            v.push("alpha_over_a needs at least 3 values for a meaningful fit".into());
        }
        for &a in &self.alpha_over_a {
            if !(a > 0.0) {
                v.push(format!("alpha_over_a entries must be positive, got {a}"));
            }
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct BoundAuditParams {
    /// Number of random parameter draws
    #[arg(long, default_value_t = 50)]
    pub draws: usize,
    /// Seed for the parameter draws
    #[arg(long, default_value_t = 20240810)]
    pub seed: u64,
    /// One-photon intensity scale
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// SI wavelength in meters (omit for wavelength units)
    #[arg(long)]
    pub wavelength: Option<f64>,
}

impl Default for BoundAuditParams {
    fn default() -> Self {
        Self {
            draws: 50,
            seed: 20240810,
            eta: 1.0,
            wavelength: None,
        }
    }
}

impl BoundAuditParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.draws == 0 {
            v.push("draws must be at least 1".into());
        }
        positive(self.eta, "eta", &mut v);
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct RotationAuditParams {
    /// Random admissible (kappa, theta) pairs to test
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Seed for the draws
    #[arg(long, default_value_t = 31)]
    pub seed: u64,
    /// Points on the emitted geometric-factor curve
    #[arg(long, default_value_t = 96)]
    pub na_curve_points: usize,
    /// Largest numerical aperture on the curve
    #[arg(long, default_value_t = 0.95)]
    pub na_max: f64,
}

impl Default for RotationAuditParams {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 31,
            na_curve_points: 96,
            na_max: 0.95,
        }
    }
}

impl RotationAuditParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.trials == 0 {
            v.push("trials must be at least 1".into());
        }
        if self.na_curve_points < 2 {
            v.push(format!(
                "na_curve_points must be at least 2, got {}",
                self.na_curve_points
            ));
        }
        if !(self.na_max > 0.0 && self.na_max < 1.0) {
            v.push(format!("na_max must lie in (0, 1), got {}", self.na_max));
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct AbsorberConvergenceParams {
    /// Beam tilt kappa0 (1/length)
    #[arg(long, default_value_t = 1.0)]
    pub kappa0: f64,
    /// Mode bandwidth (1/length)
    #[arg(long, default_value_t = 0.05)]
    pub delta_kappa: f64,
    /// Absorber widths as fractions of the fringe period
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.05, 0.025])]
    pub width_fractions: Vec<f64>,
    /// Probe position as a fraction of the fringe period
    #[arg(long, default_value_t = 0.16666666666666666)]
    pub probe_fraction: f64,
}

impl Default for AbsorberConvergenceParams {
    fn default() -> Self {
        Self {
            kappa0: 1.0,
            delta_kappa: 0.05,
            width_fractions: vec![0.1, 0.05, 0.025],
            probe_fraction: 1.0 / 6.0,
        }
    }
}

impl AbsorberConvergenceParams {
    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        positive(self.kappa0, "kappa0", &mut v);
        positive(self.delta_kappa, "delta_kappa", &mut v);
        if self.width_fractions.len() < 3 {
            v.push("width_fractions needs at least 3 values for two halving ratios".into());
        }
        for w in self.width_fractions.windows(2) {
            if !((w[1] - 0.5 * w[0]).abs() <= 1e-12 * w[0]) {
                v.push(format!(
                    "width_fractions must halve step to step, got {} then {}",
                    w[0], w[1]
                ));
            }
        }
        for &w in &self.width_fractions {
            if !(w > 0.0 && w <= 0.25) {
                v.push(format!(
                    "width_fractions entries must lie in (0, 0.25], got {w}"
                ));
            }
        }
        if !(self.probe_fraction > 0.0 && self.probe_fraction < 0.5) {
            v.push(format!(
                "probe_fraction must lie in (0, 0.5), got {}",
                self.probe_fraction
            ));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_with_kind_tag() {
        let text = "kind = \"noon_compare\"\nn_photons = 3\nkappa0 = 2.0\n";
        let s: Scenario = toml::from_str(text).unwrap();
        match &s {
            Scenario::NoonCompare(p) => {
                assert_eq!(p.n_photons, 3);
                assert_eq!(p.kappa0, 2.0);
                assert_eq!(p.delta_kappa, 0.05); // default applied
            }
            other => panic!("wrong kind: {other:?}"),
        }
        s.validate().unwrap();
    }

    #[test]
    fn json_is_accepted_as_an_alternative_encoding() {
        let text = r#"{"kind": "gaussian_pattern", "n_photons": 3, "b_param": 0.4}"#;
        let s: Scenario = serde_json::from_str(text).unwrap();
        assert_eq!(s.kind(), "gaussian_pattern");
        s.validate().unwrap();
    }

    #[test]
    fn validation_collects_every_violation() {
        let s = Scenario::NoonCompare(NoonCompareParams {
            n_photons: 0,
            kappa0: -1.0,
            delta_kappa: 0.0,
            ..Default::default()
        });
        let err = s.validate().unwrap_err().to_string();
        assert!(err.contains("n_photons"));
        assert!(err.contains("kappa0"));
        assert!(err.contains("delta_kappa"));
    }

    #[test]
    fn absorber_widths_must_halve() {
        let s = Scenario::AbsorberConvergence(AbsorberConvergenceParams {
            width_fractions: vec![0.1, 0.06, 0.03],
            ..Default::default()
        });
        assert!(s.validate().is_err());
    }
}
