//! Construction and verification of momentum-space multiphoton amplitudes.
//!
//! The catalog covers the NOON state built on a pair of orthogonal tilted
//! modes, the classical product state on the same modes, the jointly Gaussian
//! state, the biphoton double-slit state, and custom grid-sampled amplitudes.
//! Every catalog amplitude is square-normalized over its momentum support and
//! symmetric under photon exchange; `verify_normalization` and
//! `verify_symmetry` re-check both properties numerically.

mod grid;

pub use grid::{AxisSpec, GridAmplitude};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::double_slit::SlitExperiment;
use crate::error::{Error, Result};
use crate::gaussian::GaussianParams;
use crate::numerics::{
    integrate_1d_real, integrate_nd, mc_expectation, CounterRng, QuadratureSpec, RandomPlan,
};

/// Overlap below which a tilted mode pair counts as orthogonal.
pub const ORTHOGONALITY_OK: f64 = 1e-8;
/// Overlap above which NOON/classical construction is rejected.
pub const ORTHOGONALITY_FAIL: f64 = 1e-4;

/// Single-beam spectral envelope `f(q)`, unit-normalized in the
/// dimensionless argument.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeShape {
    /// `pi^(-1/4) exp(-q^2/2)`
    Gaussian,
    /// height 1 on `|q| <= 1/2`
    Rect,
    /// Linear interpolation of uniform samples, rescaled to unit norm.
    Custom(SampledEnvelope),
}

/// Uniformly sampled real envelope with linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEnvelope {
    q_lo: f64,
    spacing: f64,
    values: Vec<f64>,
}

impl SampledEnvelope {
    /// Builds from samples on `[q_lo, q_hi]` and rescales to unit
    /// square-norm.
    pub fn new(q_lo: f64, q_hi: f64, mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 {
            return Err(Error::Construction(format!(
                "sampled envelope needs at least 4 points, got {}",
                values.len()
            )));
        }
        if !(q_lo.is_finite() && q_hi.is_finite() && q_lo < q_hi) {
            return Err(Error::Construction(format!(
                "sampled envelope bounds must satisfy q_lo < q_hi, got ({q_lo}, {q_hi})"
            )));
        }
        let spacing = (q_hi - q_lo) / (values.len() - 1) as f64;
        // Exact square-norm of the piecewise-linear interpolant, so the
        // rescaled envelope is unit-normalized to quadrature precision.
        let mut norm = 0.0;
        for w in values.windows(2) {
            norm += spacing * (w[0] * w[0] + w[0] * w[1] + w[1] * w[1]) / 3.0;
        }
        if !(norm > 0.0) {
            return Err(Error::Construction(
                "sampled envelope has zero square-norm".into(),
            ));
        }
        let scale = norm.sqrt().recip();
        for v in &mut values {
            *v *= scale;
        }
        Ok(Self {
            q_lo,
            spacing,
            values,
        })
    }

    pub fn evaluate(&self, q: f64) -> f64 {
        let t = (q - self.q_lo) / self.spacing;
        if t < 0.0 || t > (self.values.len() - 1) as f64 {
            return 0.0;
        }
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    pub fn q_support(&self) -> (f64, f64) {
        (
            self.q_lo,
            self.q_lo + self.spacing * (self.values.len() - 1) as f64,
        )
    }
}

impl EnvelopeShape {
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
            Self::Custom(s) => s.evaluate(q),
        }
    }

    /// Effective support in the dimensionless argument (hard for rect and
    /// custom shapes, a 1e-16-tail window for the Gaussian).
    pub fn q_support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian => (-8.75, 8.75),
            Self::Rect => (-0.5, 0.5),
            Self::Custom(s) => s.q_support(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Rect => "rect",
            Self::Custom(_) => "custom",
        }
    }
}

/// A normalized single-beam spectrum with tilt `kappa0` and bandwidth
/// `delta_kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    shape: EnvelopeShape,
    kappa0: f64,
    delta_kappa: f64,
}

impl ModeSpectrum {
    pub fn new(shape: EnvelopeShape, kappa0: f64, delta_kappa: f64) -> Result<Self> {
        if !(delta_kappa > 0.0 && delta_kappa.is_finite()) {
            return Err(Error::Construction(format!(
                "bandwidth must be positive, got {delta_kappa}"
            )));
        }
        if !kappa0.is_finite() {
            return Err(Error::Construction(format!(
                "tilt must be finite, got {kappa0}"
            )));
        }
        Ok(Self {
            shape,
            kappa0,
            delta_kappa,
        })
    }

    pub fn gaussian(kappa0: f64, delta_kappa: f64) -> Result<Self> {
        Self::new(EnvelopeShape::Gaussian, kappa0, delta_kappa)
    }

    pub fn rect(kappa0: f64, delta_kappa: f64) -> Result<Self> {
        Self::new(EnvelopeShape::Rect, kappa0, delta_kappa)
    }

    pub fn shape(&self) -> &EnvelopeShape {
        &self.shape
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn delta_kappa(&self) -> f64 {
        self.delta_kappa
    }

    pub fn envelope(&self, q: f64) -> f64 {
        self.shape.evaluate(q)
    }

    /// `int |f(q)|^2 dq`, which must be 1 for a valid spectrum.
    pub fn envelope_norm(&self, quad: &QuadratureSpec) -> Result<f64> {
        let (lo, hi) = self.shape.q_support();
        let (v, _) = integrate_1d_real(
            |q| {
                let f = self.shape.evaluate(q);
                f * f
            },
            (lo - 0.1, hi + 0.1),
            quad,
        )?;
        Ok(v)
    }

    /// Relative overlap of the two tilted modes,
    /// `(1/dk) int f((k+k0)/dk) f(-(k-k0)/dk) dk = int f(q) f(2 k0/dk - q) dq`.
    pub fn mode_overlap(&self, quad: &QuadratureSpec) -> Result<f64> {
        let s = 2.0 * self.kappa0 / self.delta_kappa;
        let (lo, hi) = self.shape.q_support();
        // second factor supported on q in [s - hi, s - lo]
        let a = lo.max(s - hi);
        let b = hi.min(s - lo);
        if a >= b {
            return Ok(0.0);
        }
        let (v, _) = integrate_1d_real(
            |q| self.shape.evaluate(q) * self.shape.evaluate(s - q),
            (a, b),
            quad,
        )?;
        Ok(v)
    }

    /// Momentum amplitude of the beam tilted to `-kappa0`.
    pub fn mode_a(&self, kappa: f64) -> f64 {
        self.shape
            .evaluate((kappa + self.kappa0) / self.delta_kappa)
            / self.delta_kappa.sqrt()
    }

    /// Momentum amplitude of the beam tilted to `+kappa0`.
    pub fn mode_b(&self, kappa: f64) -> f64 {
        self.shape
            .evaluate(-(kappa - self.kappa0) / self.delta_kappa)
            / self.delta_kappa.sqrt()
    }
}

/// The state catalog.
#[derive(Debug, Clone)]
pub enum Variant {
    Noon(ModeSpectrum),
    ClassicalProduct(ModeSpectrum),
    JointlyGaussian(GaussianParams),
    BiphotonSlit(SlitExperiment),
    CustomGrid(GridAmplitude),
}

/// An N-photon momentum-space amplitude `phi(kappa_1, ..., kappa_N)`.
#[derive(Debug, Clone)]
pub struct MomentumAmplitude {
    n_photons: usize,
    variant: Variant,
}

fn check_mode_orthogonality(mode: &ModeSpectrum) -> Result<()> {
    let quad = QuadratureSpec::default();
    let overlap = mode.mode_overlap(&quad)?.abs();
    if overlap > ORTHOGONALITY_FAIL {
        return Err(Error::Construction(format!(
            "tilted modes overlap at {overlap:.3e} (limit {ORTHOGONALITY_FAIL:.0e}); \
             increase kappa0/delta_kappa"
        )));
    }
    if overlap > ORTHOGONALITY_OK {
        log::warn!("tilted modes overlap at {overlap:.3e}; normalization holds only to that level");
    }
    Ok(())
}

impl MomentumAmplitude {
    /// `(2 dk^N)^(-1/2) [prod_n f((k_n+k0)/dk) + prod_n f(-(k_n-k0)/dk)]`:
    /// all N photons in one tilted mode, superposed with all N in the other.
    pub fn noon(mode: ModeSpectrum, n_photons: usize) -> Result<Self> {
        if n_photons == 0 {
            return Err(Error::Construction(
                "NOON state needs at least one photon".into(),
            ));
        }
        check_mode_orthogonality(&mode)?;
        Ok(Self {
            n_photons,
            variant: Variant::Noon(mode),
        })
    }

    /// Product of one-photon amplitudes `(1/sqrt(2 dk)) [f_A + f_B]` per
    /// photon; fully separable.
    pub fn classical(mode: ModeSpectrum, n_photons: usize) -> Result<Self> {
        if n_photons == 0 {
            return Err(Error::Construction(
                "classical product state needs at least one photon".into(),
            ));
        }
        check_mode_orthogonality(&mode)?;
        Ok(Self {
            n_photons,
            variant: Variant::ClassicalProduct(mode),
        })
    }

    /// Jointly Gaussian state in the average/relative momentum coordinates;
    /// exposed in original coordinates as `phi = phi' / sqrt(N)`.
    pub fn jointly_gaussian(params: GaussianParams) -> Self {
        Self {
            n_photons: params.n_photons(),
            variant: Variant::JointlyGaussian(params),
        }
    }

    /// Biphoton pair behind a double slit; always two photons.
    pub fn biphoton_slit(experiment: SlitExperiment) -> Self {
        Self {
            n_photons: 2,
            variant: Variant::BiphotonSlit(experiment),
        }
    }

    /// Grid-sampled amplitude; the photon number is the grid dimension.
    pub fn custom_grid(grid: GridAmplitude) -> Result<Self> {
        let n_photons = grid.n_dims();
        if n_photons == 0 {
            return Err(Error::Construction("empty grid amplitude".into()));
        }
        Ok(Self {
            n_photons,
            variant: Variant::CustomGrid(grid),
        })
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn label(&self) -> String {
        match &self.variant {
            Variant::Noon(m) => format!("noon(n={}, {})", self.n_photons, m.shape().label()),
            Variant::ClassicalProduct(m) => {
                format!("classical(n={}, {})", self.n_photons, m.shape().label())
            }
            Variant::JointlyGaussian(p) => format!(
                "jointly_gaussian(n={}, b={:.4e}, beta={:.4e})",
                p.n_photons(),
                p.b_param(),
                p.beta_param()
            ),
            Variant::BiphotonSlit(e) => format!(
                "biphoton_slit(a={:.4e}, b={:.4e}, alpha={:.4e})",
                e.slit_width(),
                e.slit_spacing(),
                e.coherence_length()
            ),
            Variant::CustomGrid(g) => format!("custom_grid(n={})", g.n_dims()),
        }
    }

    /// Evaluate `phi(kappa_1, ..., kappa_N)`.
    pub fn evaluate(&self, kappas: &[f64]) -> Result<Complex64> {
        if kappas.len() != self.n_photons {
            return Err(Error::InvalidArgument(format!(
                "amplitude takes {} momenta, got {}",
                self.n_photons,
                kappas.len()
            )));
        }
        Ok(match &self.variant {
            Variant::Noon(mode) => {
                let mut prod_a = 1.0;
                let mut prod_b = 1.0;
                for &k in kappas {
                    prod_a *= mode.mode_a(k);
                    prod_b *= mode.mode_b(k);
                }
                Complex64::new((prod_a + prod_b) / 2.0_f64.sqrt(), 0.0)
            }
            Variant::ClassicalProduct(mode) => {
                let mut prod = 1.0;
                for &k in kappas {
                    prod *= (mode.mode_a(k) + mode.mode_b(k)) / 2.0_f64.sqrt();
                }
                Complex64::new(prod, 0.0)
            }
            Variant::JointlyGaussian(p) => {
                let n = self.n_photons as f64;
                let total = kappas.iter().sum::<f64>() / n;
                let relative: Vec<f64> = kappas.iter().map(|k| k - total).collect();
                let phi_prime = p.phi_prime(total, &relative)?;
                Complex64::new(phi_prime / n.sqrt(), 0.0)
            }
            Variant::BiphotonSlit(e) => e.momentum(kappas[0], kappas[1]),
            Variant::CustomGrid(g) => g.interpolate(kappas),
        })
    }

    /// Per-axis momentum window outside which the amplitude is negligible
    /// (exact for hard-supported shapes, a deep-tail window otherwise).
    pub fn effective_support(&self) -> (f64, f64) {
        match &self.variant {
            Variant::Noon(mode) | Variant::ClassicalProduct(mode) => {
                let (q_lo, q_hi) = mode.shape().q_support();
                let reach = q_lo.abs().max(q_hi.abs()) * mode.delta_kappa() + mode.kappa0().abs();
                (-reach, reach)
            }
            Variant::JointlyGaussian(p) => {
                let sigma = p.single_photon_variance().sqrt();
                (-8.5 * sigma, 8.5 * sigma)
            }
            Variant::BiphotonSlit(e) => {
                // Heuristic plotting window: a handful of aperture lobes plus
                // the correlation bandwidth. Normalization never uses it.
                let reach = 15.0 * PI / e.slit_width() + 9.0 / e.coherence_length();
                (-reach, reach)
            }
            Variant::CustomGrid(g) => {
                let lo = g.axes().iter().map(|a| a.lo).fold(f64::INFINITY, f64::min);
                let hi = g
                    .axes()
                    .iter()
                    .map(|a| a.hi)
                    .fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        }
    }
}

/// How a normalization value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    TensorQuadrature,
    RotatedSeparable,
    GridSum,
    MonteCarlo,
}

/// Result of a normalization check: the integral of `|phi|^2` and, for the
/// Monte Carlo route, a statistical error bar.
#[derive(Debug, Clone, Copy)]
pub struct NormalizationCheck {
    pub value: f64,
    pub std_error: Option<f64>,
    pub method: NormMethod,
}

/// Numerically integrate `|phi|^2` over the amplitude's support.
///
/// Grid amplitudes are summed directly; the double-slit state uses the exact
/// rotated-coordinate separation; tensor quadrature covers up to three
/// photons; beyond that the check falls back to importance-sampled Monte
/// Carlo under `plan` and reports its standard error.
pub fn verify_normalization(
    amp: &MomentumAmplitude,
    quad: &QuadratureSpec,
    plan: &RandomPlan,
) -> Result<NormalizationCheck> {
    match amp.variant() {
        Variant::CustomGrid(g) => Ok(NormalizationCheck {
            value: g.squared_norm(),
            std_error: None,
            method: NormMethod::GridSum,
        }),
        Variant::BiphotonSlit(e) => Ok(NormalizationCheck {
            value: e.near_field_normalization(quad)?,
            std_error: None,
            method: NormMethod::RotatedSeparable,
        }),
        _ if amp.n_photons() <= 3 => {
            let (lo, hi) = amp.effective_support();
            let boxes = vec![(lo, hi); amp.n_photons()];
            let (value, _) = integrate_nd(
                |p| {
                    let v = amp.evaluate(p).expect("dimension fixed by caller");
                    Complex64::new(v.norm_sqr(), 0.0)
                },
                &boxes,
                quad,
            )?;
            Ok(NormalizationCheck {
                value: value.re,
                std_error: None,
                method: NormMethod::TensorQuadrature,
            })
        }
        Variant::JointlyGaussian(p) => {
            let est = crate::gaussian::mc_normalization(p, plan);
            Ok(NormalizationCheck {
                value: est.mean,
                std_error: Some(est.std_error),
                method: NormMethod::MonteCarlo,
            })
        }
        Variant::Noon(mode) | Variant::ClassicalProduct(mode) => {
            let est = mc_mixture_normalization(amp, mode, plan)?;
            Ok(NormalizationCheck {
                value: est.0,
                std_error: Some(est.1),
                method: NormMethod::MonteCarlo,
            })
        }
    }
}

/// Importance-sampled normalization for tilted-mode states: each photon is
/// drawn from the two-mode intensity mixture, whose density is known in
/// closed form, and `|phi|^2` is reweighted against it.
fn mc_mixture_normalization(
    amp: &MomentumAmplitude,
    mode: &ModeSpectrum,
    plan: &RandomPlan,
) -> Result<(f64, f64)> {
    let n = amp.n_photons();
    let draw_q = match mode.shape() {
        EnvelopeShape::Gaussian => |rng: &mut CounterRng| rng.normal() / 2.0_f64.sqrt(),
        EnvelopeShape::Rect => |rng: &mut CounterRng| rng.uniform(-0.5, 0.5),
        EnvelopeShape::Custom(_) => {
            return Err(Error::Capability(
                "Monte Carlo normalization supports gaussian and rect envelopes; \
                 sample custom-envelope states on a grid instead"
                    .into(),
            ))
        }
    };
    let mode = mode.clone();
    let amp = amp.clone();
    let est = mc_expectation(
        move |rng| {
            let mut kappas = Vec::with_capacity(n);
            for _ in 0..n {
                let q = draw_q(rng);
                let kappa = if rng.next_f64() < 0.5 {
                    q * mode.delta_kappa() - mode.kappa0()
                } else {
                    mode.kappa0() - q * mode.delta_kappa()
                };
                kappas.push(kappa);
            }
            let mut proposal = 1.0;
            for &k in &kappas {
                let a = mode.mode_a(k);
                let b = mode.mode_b(k);
                proposal *= 0.5 * (a * a + b * b);
            }
            let phi = amp.evaluate(&kappas).expect("lengths match");
            phi.norm_sqr() / proposal
        },
        |w| *w,
        plan,
    );
    Ok((est.mean, est.std_error))
}

/// Maximum deviation `|phi(..k_n..k_m..) - phi(..k_m..k_n..)|` over random
/// argument transpositions.
///
/// Node-aligned grids are checked exhaustively over all axis transpositions,
/// so a single asymmetric entry is reported at its exact magnitude;
/// analytic variants are probed at `trials` random momentum configurations.
pub fn verify_symmetry(amp: &MomentumAmplitude, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "symmetry check needs trials >= 1".into(),
        ));
    }
    if amp.n_photons() == 1 {
        return Ok(0.0);
    }

    if let Variant::CustomGrid(g) = amp.variant() {
        let axes = g.axes();
        let uniform_axes = axes.windows(2).all(|w| w[0] == w[1]);
        if uniform_axes && g.total_points() <= 4_000_000 {
            return Ok(grid_symmetry_exhaustive(g));
        }
    }

    let (lo, hi) = amp.effective_support();
    let n = amp.n_photons();
    let mut max_dev = 0.0_f64;
    for trial in 0..trials {
        let mut rng = CounterRng::for_sample(seed, 0, trial as u64);
        let mut kappas: Vec<f64> = (0..n).map(|_| rng.uniform(lo, hi)).collect();
        let i = (rng.next_u64() % n as u64) as usize;
        let mut j = (rng.next_u64() % (n as u64 - 1)) as usize;
        if j >= i {
            j += 1;
        }
        let phi = amp.evaluate(&kappas)?;
        kappas.swap(i, j);
        let phi_swapped = amp.evaluate(&kappas)?;
        max_dev = max_dev.max((phi - phi_swapped).norm());
    }
    Ok(max_dev)
}

fn grid_symmetry_exhaustive(g: &GridAmplitude) -> f64 {
    let dim = g.n_dims();
    let total = g.total_points();
    let mut index = vec![0usize; dim];
    let mut swapped = vec![0usize; dim];
    let mut max_dev = 0.0_f64;
    for flat in 0..total {
        let mut rem = flat;
        for d in (0..dim).rev() {
            index[d] = rem % g.axes()[d].points;
            rem /= g.axes()[d].points;
        }
        for d1 in 0..dim {
            for d2 in d1 + 1..dim {
                swapped.copy_from_slice(&index);
                swapped.swap(d1, d2);
                let dev = (g.value_at(&index) - g.value_at(&swapped)).norm();
                max_dev = max_dev.max(dev);
            }
        }
    }
    max_dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn gaussian_mode(kappa0: f64, delta_kappa: f64) -> ModeSpectrum {
        ModeSpectrum::gaussian(kappa0, delta_kappa).unwrap()
    }

    #[test]
    fn envelope_shapes_are_unit_normalized() {
        let quad = QuadratureSpec::default();
        for shape in [EnvelopeShape::Gaussian, EnvelopeShape::Rect] {
            let mode = ModeSpectrum::new(shape, 1.0, 0.1).unwrap();
            assert_abs_diff_eq!(mode.envelope_norm(&quad).unwrap(), 1.0, epsilon = 1e-10);
        }
        let q: Vec<f64> = (0..101)
            .map(|i| {
                let x = -4.0 + 0.08 * i as f64;
                (-x * x).exp() * (1.0 + 0.3 * x)
            })
            .collect();
        let custom = EnvelopeShape::Custom(SampledEnvelope::new(-4.0, 4.0, q).unwrap());
        let mode = ModeSpectrum::new(custom, 1.0, 0.1).unwrap();
        assert_abs_diff_eq!(mode.envelope_norm(&quad).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn gaussian_mode_overlap_matches_closed_form() {
        let quad = QuadratureSpec::default();
        for ratio in [3.0, 4.3, 6.0] {
            let mode = gaussian_mode(ratio * 0.1, 0.1);
            let overlap = mode.mode_overlap(&quad).unwrap();
            assert_relative_eq!(overlap, (-ratio * ratio).exp(), max_relative = 1e-8);
        }
    }

    #[test]
    fn orthogonality_threshold_enforced() {
        // kappa0/delta_kappa = 2 -> overlap e^-4 ~ 1.8e-2 > 1e-4: rejected
        let err = MomentumAmplitude::noon(gaussian_mode(0.2, 0.1), 2).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
        // ratio 10 -> overlap e^-100: fine
        assert!(MomentumAmplitude::noon(gaussian_mode(1.0, 0.1), 2).is_ok());
        // rect modes are exactly orthogonal once separated
        assert!(MomentumAmplitude::classical(ModeSpectrum::rect(0.2, 0.1).unwrap(), 3).is_ok());
    }

    #[test]
    fn noon_equals_classical_for_one_photon() {
        let mode = gaussian_mode(1.0, 0.1);
        let noon = MomentumAmplitude::noon(mode.clone(), 1).unwrap();
        let classical = MomentumAmplitude::classical(mode, 1).unwrap();
        let mut rng = CounterRng::from_seed(3);
        for _ in 0..100 {
            let k = rng.uniform(-2.0, 2.0);
            let a = noon.evaluate(&[k]).unwrap();
            let b = classical.evaluate(&[k]).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn classical_value_at_the_tilt_momentum() {
        // phi_C(k0, k0) = (1/2)(1/dk) [f(2 k0/dk) + f(0)]^2
        let mode = gaussian_mode(1.0, 0.1);
        let amp = MomentumAmplitude::classical(mode.clone(), 2).unwrap();
        let k0 = mode.kappa0();
        let f = |q: f64| mode.envelope(q);
        let expected =
            0.5 / mode.delta_kappa() * (f(2.0 * k0 / mode.delta_kappa()) + f(0.0)).powi(2);
        let got = amp.evaluate(&[k0, k0]).unwrap();
        assert_relative_eq!(got.re, expected, max_relative = 1e-12);
        // dominated by the f(0) term at this mode separation
        assert_relative_eq!(
            got.re,
            0.5 / mode.delta_kappa() * f(0.0).powi(2),
            max_relative = 1e-8
        );
    }

    #[test]
    fn noon_opposite_tilts_are_dark() {
        let mode = gaussian_mode(1.0, 0.1);
        let amp = MomentumAmplitude::noon(mode.clone(), 2).unwrap();
        let peak = amp.evaluate(&[-1.0, -1.0]).unwrap().norm();
        let cross = amp.evaluate(&[1.0, -1.0]).unwrap().norm();
        assert!(cross < 1e-8 * peak, "cross/peak = {:.3e}", cross / peak);
    }

    #[test]
    fn classical_state_is_separable() {
        let mode = gaussian_mode(1.0, 0.2);
        let amp = MomentumAmplitude::classical(mode, 2).unwrap();
        let mut rng = CounterRng::from_seed(11);
        for _ in 0..50 {
            let (k1, k2) = (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            let (k1p, k2p) = (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            let lhs = amp.evaluate(&[k1, k2]).unwrap() * amp.evaluate(&[k1p, k2p]).unwrap();
            let rhs = amp.evaluate(&[k1, k2p]).unwrap() * amp.evaluate(&[k1p, k2]).unwrap();
            let scale = lhs.norm().max(rhs.norm()).max(1e-300);
            assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn jointly_gaussian_evaluate_matches_decoupled_form() {
        let p = GaussianParams::new(2, 1.0, 1.0).unwrap();
        let amp = MomentumAmplitude::jointly_gaussian(p);
        let c = p.normalization_constant();
        // at the origin phi = sqrt(C/N)
        let at_zero = amp.evaluate(&[0.0, 0.0]).unwrap();
        assert_relative_eq!(at_zero.re, (c / 2.0).sqrt(), max_relative = 1e-14);
        // and phi' itself is sqrt(C)
        assert_relative_eq!(
            p.phi_prime(0.0, &[0.0, 0.0]).unwrap(),
            c.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn jointly_gaussian_separable_at_classical_point() {
        // B^2 = beta^2 / N factorizes into identical one-photon Gaussians
        let n = 3usize;
        let beta = 1.2;
        let p = GaussianParams::new(n, beta / (n as f64).sqrt(), beta).unwrap();
        let amp = MomentumAmplitude::jointly_gaussian(p);
        let one_photon =
            |k: f64| (2.0 * PI).powf(-0.25) / beta.sqrt() * (-k * k / (4.0 * beta * beta)).exp();
        let mut rng = CounterRng::from_seed(17);
        for _ in 0..50 {
            let kappas: Vec<f64> = (0..n).map(|_| rng.uniform(-2.5, 2.5)).collect();
            let expected: f64 = kappas.iter().map(|&k| one_photon(k)).product();
            let got = amp.evaluate(&kappas).unwrap().re;
            assert_relative_eq!(got, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn normalization_noon_two_photon_tensor() {
        let amp = MomentumAmplitude::noon(gaussian_mode(1.0, 0.1), 2).unwrap();
        let quad = QuadratureSpec::default().with_points_per_dim(256);
        let check = verify_normalization(&amp, &quad, &RandomPlan::new(1, 1000)).unwrap();
        assert_eq!(check.method, NormMethod::TensorQuadrature);
        assert_abs_diff_eq!(check.value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn normalization_classical_three_photon_tensor() {
        let amp = MomentumAmplitude::classical(gaussian_mode(1.0, 0.2), 3).unwrap();
        let quad = QuadratureSpec::default().with_points_per_dim(192);
        let check = verify_normalization(&amp, &quad, &RandomPlan::new(1, 1000)).unwrap();
        assert_abs_diff_eq!(check.value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn normalization_monte_carlo_for_four_photons() {
        let plan = RandomPlan::new(20240810, 200_000);
        let quad = QuadratureSpec::default();

        let amp = MomentumAmplitude::jointly_gaussian(GaussianParams::new(4, 0.7, 1.1).unwrap());
        let check = verify_normalization(&amp, &quad, &plan).unwrap();
        assert_eq!(check.method, NormMethod::MonteCarlo);
        let se = check.std_error.unwrap();
        // the 1e-12 floor covers estimators whose weights are constant to
        // machine precision (separable states with far-separated modes)
        assert!((check.value - 1.0).abs() <= 3.0 * se + 1e-12, "{check:?}");

        let amp = MomentumAmplitude::noon(gaussian_mode(1.0, 0.1), 4).unwrap();
        let check = verify_normalization(&amp, &quad, &plan).unwrap();
        let se = check.std_error.unwrap();
        assert!((check.value - 1.0).abs() <= 3.0 * se + 1e-12, "{check:?}");

        let amp = MomentumAmplitude::classical(gaussian_mode(1.0, 0.1), 5).unwrap();
        let check = verify_normalization(&amp, &quad, &plan).unwrap();
        let se = check.std_error.unwrap();
        assert!((check.value - 1.0).abs() <= 3.0 * se + 1e-12, "{check:?}");
    }

    #[test]
    fn mis_scaled_grid_reports_quadruple_norm() {
        let ax = AxisSpec::new(-6.0, 6.0, 201).unwrap();
        let norm_1d = PI.powf(-0.25);
        let mut grid = GridAmplitude::from_fn(vec![ax, ax], |p| {
            Complex64::new(
                norm_1d * norm_1d * (-0.5 * (p[0] * p[0] + p[1] * p[1])).exp(),
                0.0,
            )
        })
        .unwrap();
        grid.scale(2.0);
        let amp = MomentumAmplitude::custom_grid(grid).unwrap();
        let check =
            verify_normalization(&amp, &QuadratureSpec::default(), &RandomPlan::new(1, 100))
                .unwrap();
        assert_eq!(check.method, NormMethod::GridSum);
        assert_abs_diff_eq!(check.value, 4.0, epsilon = 1e-3);
    }

    #[test]
    fn symmetry_of_catalog_states() {
        let mode = gaussian_mode(1.0, 0.15);
        for amp in [
            MomentumAmplitude::noon(mode.clone(), 3).unwrap(),
            MomentumAmplitude::classical(mode, 3).unwrap(),
            MomentumAmplitude::jointly_gaussian(GaussianParams::new(3, 0.4, 1.0).unwrap()),
        ] {
            let dev = verify_symmetry(&amp, 1000, 99).unwrap();
            assert!(dev < 1e-12, "{}: {dev:.3e}", amp.label());
        }
    }

    #[test]
    fn symmetry_detector_finds_planted_asymmetry() {
        let ax = AxisSpec::new(-1.0, 1.0, 11).unwrap();
        let mut grid = GridAmplitude::from_fn(vec![ax, ax], |p| {
            Complex64::new((-(p[0] * p[0] + p[1] * p[1])).exp(), 0.0)
        })
        .unwrap();
        let planted = 0.037;
        let base = grid.value_at(&[2, 7]);
        grid.set_value(&[2, 7], base + planted);
        let amp = MomentumAmplitude::custom_grid(grid).unwrap();
        let dev = verify_symmetry(&amp, 10, 1).unwrap();
        assert_relative_eq!(dev, planted, max_relative = 1e-12);
    }

    #[test]
    fn symmetry_is_vacuous_for_one_photon() {
        let amp = MomentumAmplitude::jointly_gaussian(GaussianParams::new(1, 1.0, 1.0).unwrap());
        assert_eq!(verify_symmetry(&amp, 100, 5).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_rejects_wrong_arity() {
        let amp = MomentumAmplitude::noon(gaussian_mode(1.0, 0.1), 2).unwrap();
        assert!(matches!(
            amp.evaluate(&[0.0]),
            Err(Error::InvalidArgument(_))
        ));
    }
}
