//! Closed-form analytics for the jointly Gaussian N-photon state.
//!
//! The state is Gaussian in the average momentum `K` (spread `B`) and in the
//! relative momenta `kappa_n' = kappa_n - K` (spread `beta`), with
//! `kappa_N' = -sum kappa_n'` fixed as the dependent variable. Two parameters
//! therefore control the photon correlations, the absorption spot size, and
//! the absorption rate, which makes the state the natural vehicle for the
//! resolution-versus-rate trade-off:
//!
//! * `phi'(K, kappa') = sqrt(C) exp(-K^2/4B^2) exp(-sum kappa_n'^2 / 4 beta^2)`
//! * `C = sqrt(N/(2 pi)^N) / (B beta^(N-1))`
//! * pattern `N! eta^N sqrt(N) (2/pi)^(N/2) B beta^(N-1) exp(-2 N^2 B^2 x^2)`
//!
//! Structured covariance matrices (identity plus rank-one) are kept in their
//! two-parameter closed forms; nothing here calls dense linear algebra.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::factorial;
use crate::numerics::{mc_expectation, CounterRng, McEstimate, RandomPlan};

/// Parameters of the jointly Gaussian state.
///
/// `kappa2_budget`, when present, pins the per-photon momentum variance
/// `<kappa_n^2> = B^2 + (1 - 1/N) beta^2` as the fixed optical resource from
/// which the spot-size reduction factor `r` is defined.
#[derive(Debug, Clone, Copy)]
pub struct GaussianParams {
    n_photons: usize,
    b_param: f64,
    beta_param: f64,
    kappa2_budget: Option<f64>,
}

/// Momentum covariances in both coordinate systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumCovariances {
    /// `<K^2>`
    pub var_total: f64,
    /// `<kappa_n'^2>`
    pub var_rel: f64,
    /// `<kappa_n' kappa_m'>`, n != m
    pub cov_rel: f64,
    /// `<kappa_n^2>`
    pub var_single: f64,
    /// `<kappa_n kappa_m>`, n != m
    pub cov_pair: f64,
}

/// Position covariances of the paraxial configuration-space density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionCovariances {
    /// `<x_n^2>`
    pub var: f64,
    /// `<x_n x_m>`, n != m
    pub cov: f64,
}

/// Root-mean-square pattern widths; the classical and minimal references
/// require the momentum budget.
#[derive(Debug, Clone, Copy)]
pub struct RmsWidths {
    pub width: f64,
    pub width_classical: Option<f64>,
    pub width_min: Option<f64>,
}

impl GaussianParams {
    pub fn new(n_photons: usize, b_param: f64, beta_param: f64) -> Result<Self> {
        if n_photons == 0 {
            return Err(Error::Construction(
                "a jointly Gaussian state needs at least one photon".into(),
            ));
        }
        if !(b_param > 0.0 && b_param.is_finite()) {
            return Err(Error::Construction(format!(
                "average-momentum spread B must be positive, got {b_param}"
            )));
        }
        if !(beta_param > 0.0 && beta_param.is_finite()) {
            return Err(Error::Construction(format!(
                "relative-momentum spread beta must be positive, got {beta_param}"
            )));
        }
        Ok(Self {
            n_photons,
            b_param,
            beta_param,
            kappa2_budget: None,
        })
    }

    /// Attach a fixed `<kappa_n^2>` resource; it must match the parameters.
    pub fn with_budget(mut self, kappa2_budget: f64) -> Result<Self> {
        let implied = self.single_photon_variance();
        if (implied - kappa2_budget).abs() > 1e-12 * kappa2_budget.abs().max(implied.abs()) {
            return Err(Error::Construction(format!(
                "budget {kappa2_budget} does not match B^2 + (1-1/N) beta^2 = {implied}"
            )));
        }
        self.kappa2_budget = Some(kappa2_budget);
        Ok(self)
    }

    /// Parameters realizing spot reduction `r` under a fixed `<kappa_n^2>`.
    pub fn from_budget_and_reduction(n_photons: usize, r: f64, kappa2_budget: f64) -> Result<Self> {
        if n_photons < 2 {
            return Err(Error::Construction(
                "the trade-off parameterization needs at least two photons".into(),
            ));
        }
        if !(kappa2_budget > 0.0) {
            return Err(Error::Construction(format!(
                "momentum budget must be positive, got {kappa2_budget}"
            )));
        }
        let n = n_photons as f64;
        if !(r > 0.0 && r < n.sqrt()) {
            return Err(Error::InvalidArgument(format!(
                "spot reduction r = {r} outside (0, sqrt(N) = {})",
                n.sqrt()
            )));
        }
        let b = r * (kappa2_budget / n).sqrt();
        let beta = (kappa2_budget * (n - r * r) / (n - 1.0)).sqrt();
        Self::new(n_photons, b, beta)?.with_budget(kappa2_budget)
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn b_param(&self) -> f64 {
        self.b_param
    }

    pub fn beta_param(&self) -> f64 {
        self.beta_param
    }

    pub fn kappa2_budget(&self) -> Option<f64> {
        self.kappa2_budget
    }

    /// `B^2 + (1 - 1/N) beta^2`, the variance of each photon's momentum.
    pub fn single_photon_variance(&self) -> f64 {
        let n = self.n_photons as f64;
        if self.n_photons == 1 {
            self.b_param * self.b_param
        } else {
            self.b_param * self.b_param + (1.0 - 1.0 / n) * self.beta_param * self.beta_param
        }
    }

    /// Spot-size reduction factor `r = sqrt(N/<kappa_n^2>) B`; requires the
    /// budget.
    pub fn spot_reduction(&self) -> Option<f64> {
        self.kappa2_budget
            .map(|k2| (self.n_photons as f64 / k2).sqrt() * self.b_param)
    }

    /// Normalization constant `C = sqrt(N/(2 pi)^N) / (B beta^(N-1))`.
    pub fn normalization_constant(&self) -> f64 {
        let n = self.n_photons as f64;
        let num = (n / (2.0 * PI).powi(self.n_photons as i32)).sqrt();
        num / (self.b_param * self.beta_param.powi(self.n_photons as i32 - 1))
    }

    /// The defining amplitude in decoupled coordinates. `relative` must hold
    /// all N relative momenta (summing to zero).
    pub fn phi_prime(&self, total: f64, relative: &[f64]) -> Result<f64> {
        if relative.len() != self.n_photons {
            return Err(Error::InvalidArgument(format!(
                "expected {} relative momenta, got {}",
                self.n_photons,
                relative.len()
            )));
        }
        let b2 = self.b_param * self.b_param;
        let beta2 = self.beta_param * self.beta_param;
        let rel_sq: f64 = relative.iter().map(|k| k * k).sum();
        Ok(self.normalization_constant().sqrt()
            * (-total * total / (4.0 * b2) - rel_sq / (4.0 * beta2)).exp())
    }

    pub fn momentum_covariances(&self) -> MomentumCovariances {
        let n = self.n_photons as f64;
        let b2 = self.b_param * self.b_param;
        let beta2 = self.beta_param * self.beta_param;
        if self.n_photons == 1 {
            return MomentumCovariances {
                var_total: b2,
                var_rel: 0.0,
                cov_rel: 0.0,
                var_single: b2,
                cov_pair: 0.0,
            };
        }
        MomentumCovariances {
            var_total: b2,
            var_rel: (1.0 - 1.0 / n) * beta2,
            cov_rel: -beta2 / n,
            var_single: b2 + (1.0 - 1.0 / n) * beta2,
            cov_pair: b2 - beta2 / n,
        }
    }

    pub fn position_covariances(&self) -> PositionCovariances {
        let n = self.n_photons as f64;
        let b2 = self.b_param * self.b_param;
        let beta2 = self.beta_param * self.beta_param;
        if self.n_photons == 1 {
            return PositionCovariances {
                var: 1.0 / (4.0 * b2),
                cov: 0.0,
            };
        }
        PositionCovariances {
            var: 0.25 * (1.0 / (n * n * b2) + (1.0 - 1.0 / n) / beta2),
            cov: (1.0 / (4.0 * n)) * (1.0 / (n * b2) - 1.0 / beta2),
        }
    }

    /// Absorption pattern
    /// `N! eta^N sqrt(N) (2/pi)^(N/2) B beta^(N-1) exp(-2 N^2 B^2 x^2)`.
    pub fn analytic_pattern(&self, x: f64, eta: f64) -> f64 {
        let n = self.n_photons as f64;
        factorial(self.n_photons)
            * eta.powi(self.n_photons as i32)
            * n.sqrt()
            * (2.0 / PI).powf(n / 2.0)
            * self.b_param
            * self.beta_param.powi(self.n_photons as i32 - 1)
            * (-2.0 * n * n * self.b_param * self.b_param * x * x).exp()
    }

    /// Root-mean-square widths of the pattern.
    ///
    /// The pattern `exp(-2 N^2 B^2 x^2)` has second-moment width
    /// `W = 1/(2NB)`; the classical and minimal references scale as
    /// `1/(2 sqrt(N <k^2>))` and `1/(2 N sqrt(<k^2>))`, so every width ratio
    /// (`r`, `W_C/W_min = sqrt(N)`) is unaffected by the overall constant.
    pub fn rms_widths(&self) -> RmsWidths {
        let n = self.n_photons as f64;
        let width = 1.0 / (2.0 * n * self.b_param);
        let (width_classical, width_min) = match self.kappa2_budget {
            Some(k2) => (
                Some(1.0 / (2.0 * (n * k2).sqrt())),
                Some(1.0 / (2.0 * n * k2.sqrt())),
            ),
            None => (None, None),
        };
        RmsWidths {
            width,
            width_classical,
            width_min,
        }
    }

    /// The uncorrelated state with the same `<kappa_n^2>`: `B^2 = beta^2/N`.
    pub fn classical_reference(&self) -> Result<GaussianParams> {
        let k2 = self.kappa2_budget.ok_or_else(|| {
            Error::InvalidArgument(
                "classical reference requires the momentum budget to be set".into(),
            )
        })?;
        let n = self.n_photons as f64;
        GaussianParams::new(self.n_photons, (k2 / n).sqrt(), k2.sqrt())?.with_budget(k2)
    }
}

/// Normalized peak rate `R = r ((N - r^2)/(N - 1))^((N-1)/2)`.
pub fn normalized_peak_rate(n_photons: usize, r: f64) -> Result<f64> {
    Ok(r * normalized_total_rate(n_photons, r)?)
}

/// Normalized total rate `R_tot = ((N - r^2)/(N - 1))^((N-1)/2)`.
pub fn normalized_total_rate(n_photons: usize, r: f64) -> Result<f64> {
    if n_photons < 2 {
        return Err(Error::InvalidArgument(
            "normalized rates are defined for N >= 2".into(),
        ));
    }
    let n = n_photons as f64;
    if !(r > 0.0 && r < n.sqrt()) {
        return Err(Error::InvalidArgument(format!(
            "spot reduction r = {r} outside (0, sqrt(N) = {})",
            n.sqrt()
        )));
    }
    Ok(((n - r * r) / (n - 1.0)).powf((n - 1.0) / 2.0))
}

/// Trade-off table `(r, R, R_tot)` over a grid of reduction factors.
pub fn tradeoff_curves(n_photons: usize, r_grid: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    r_grid
        .iter()
        .map(|&r| {
            let total = normalized_total_rate(n_photons, r)?;
            Ok((r, r * total, total))
        })
        .collect()
}

/// `r -> 0` limit of the total rate, `(N/(N-1))^((N-1)/2)`.
pub fn total_rate_zero_spot_limit(n_photons: usize) -> Result<f64> {
    if n_photons < 2 {
        return Err(Error::InvalidArgument(
            "normalized rates are defined for N >= 2".into(),
        ));
    }
    let n = n_photons as f64;
    Ok((n / (n - 1.0)).powf((n - 1.0) / 2.0))
}

/// Large-N envelope of the peak rate, `r exp((1 - r^2)/2)`.
pub fn asymptotic_peak_rate(r: f64) -> f64 {
    r * asymptotic_total_rate(r)
}

/// Large-N envelope of the total rate, `exp((1 - r^2)/2)`.
pub fn asymptotic_total_rate(r: f64) -> f64 {
    ((1.0 - r * r) / 2.0).exp()
}

/// One draw from the defining density `|phi'|^2`, in decoupled coordinates.
///
/// Sampled by rejection against an iid relative-momentum proposal, so the
/// draw depends only on the defining amplitude, never on derived covariance
/// formulas; this keeps Monte Carlo usable as an independent oracle for them.
#[derive(Debug, Clone)]
pub struct MomentumSample {
    /// Average momentum `K`.
    pub total: f64,
    /// All N relative momenta; they sum to zero.
    pub relative: Vec<f64>,
}

impl MomentumSample {
    /// Original-coordinate momenta `kappa_n = K + kappa_n'`.
    pub fn kappas(&self) -> Vec<f64> {
        self.relative.iter().map(|k| self.total + k).collect()
    }
}

/// Draw one momentum configuration from `|phi'|^2`.
pub fn sample_momentum_config(params: &GaussianParams, rng: &mut CounterRng) -> MomentumSample {
    let n = params.n_photons;
    let total = params.b_param * rng.normal();
    if n == 1 {
        return MomentumSample {
            total,
            relative: vec![0.0],
        };
    }
    let beta = params.beta_param;
    loop {
        let mut relative = Vec::with_capacity(n);
        let mut sum = 0.0;
        for _ in 0..n - 1 {
            let z = beta * rng.normal();
            relative.push(z);
            sum += z;
        }
        // phi'^2 carries exp(-(sum)^2 / 2 beta^2) on top of the iid proposal.
        if rng.next_f64() < (-sum * sum / (2.0 * beta * beta)).exp() {
            relative.push(-sum);
            return MomentumSample { total, relative };
        }
    }
}

/// Position-moment observable `x_n x_m` expressed in momentum space.
///
/// With a real normalized amplitude, `<x_n x_m> = int (d phi/d kappa_n)
/// (d phi/d kappa_m)`, and the log-gradient of the defining amplitude is
/// `-K/(2NB^2) - kappa_n'/(2 beta^2)`; the product of two such factors scored
/// under `|phi'|^2` estimates the position covariance without using any
/// derived covariance formula.
pub fn position_moment_observable(
    params: &GaussianParams,
    sample: &MomentumSample,
    n_idx: usize,
    m_idx: usize,
) -> f64 {
    let n = params.n_photons as f64;
    let b2 = params.b_param * params.b_param;
    let beta2 = params.beta_param * params.beta_param;
    let grad = |idx: usize| -> f64 {
        let rel_term = if params.n_photons == 1 {
            0.0
        } else {
            sample.relative[idx] / (2.0 * beta2)
        };
        sample.total / (2.0 * n * b2) + rel_term
    };
    grad(n_idx) * grad(m_idx)
}

/// Monte Carlo estimate of the squared-amplitude normalization.
///
/// Importance-samples the relative-coordinate coupling against an iid
/// proposal; the expectation equals `int |phi'|^2` and so checks the
/// closed-form constant `C` with a genuine statistical error bar.
pub fn mc_normalization(params: &GaussianParams, plan: &RandomPlan) -> McEstimate {
    let n = params.n_photons;
    let beta = params.beta_param;
    let prefactor = params.normalization_constant()
        * (2.0 * PI).sqrt()
        * params.b_param
        * ((2.0 * PI).sqrt() * beta).powi(n as i32 - 1);
    let est = mc_expectation(
        |rng| {
            if n == 1 {
                return 1.0;
            }
            let mut sum = 0.0;
            for _ in 0..n - 1 {
                sum += beta * rng.normal();
            }
            (-sum * sum / (2.0 * beta * beta)).exp()
        },
        |w| *w,
        plan,
    );
    McEstimate {
        mean: prefactor * est.mean,
        std_error: prefactor * est.std_error,
        n_samples: est.n_samples,
    }
}
