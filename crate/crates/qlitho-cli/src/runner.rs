//! Scenario execution: drives the library, writes artifacts, and fills the
//! run summary with the same checks (and the same tolerances) that the
//! acceptance suite asserts.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use qlitho::absorption::{
    absorption_pattern, absorption_rate_at, discrete_absorber_pattern, fringe_metrics,
    symmetric_grid, PatternScan,
};
use qlitho::double_slit::{linear_fit_through_origin, SlitExperiment};
use qlitho::field::{factorial, geometric_factor, rotate_mode, schwarz_bound_density};
use qlitho::gaussian::{
    normalized_peak_rate, normalized_total_rate, total_rate_zero_spot_limit, GaussianParams,
};
use qlitho::numerics::CounterRng;
use qlitho::propagate::{diagonal_amplitude, Regime};
use qlitho::states::{verify_normalization, ModeSpectrum, MomentumAmplitude, NormMethod};
use qlitho::{OpticalContext, QuadratureSpec, RandomPlan};

use crate::report::{echo, write_csv, write_plotdata, CheckResult, RunSummary};
use crate::scenario::{context_from, parse_corr_shape, Scenario};

/// Options shared by every run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
    pub tolerance_scale: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("out"),
            seed_override: None,
            tolerance_scale: 1.0,
        }
    }
}

pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunSummary> {
    let mut scenario = scenario.clone();
    if let Some(seed) = opts.seed_override {
        scenario.override_seed(seed);
    }
    scenario.validate()?;
    std::fs::create_dir_all(&opts.out_dir)
        .with_context(|| format!("creating output directory {}", opts.out_dir.display()))?;

    let mut summary = match &scenario {
        Scenario::NoonCompare(p) => run_noon_compare(p, opts)?,
        Scenario::GaussianTradeoff(p) => run_gaussian_tradeoff(p, opts)?,
        Scenario::GaussianPattern(p) => run_gaussian_pattern(p, opts)?,
        Scenario::DoubleSlitAngular(p) => run_double_slit_angular(p, opts)?,
        Scenario::DoubleSlitAlphaScan(p) => run_double_slit_alpha_scan(p, opts)?,
        Scenario::BoundAudit(p) => run_bound_audit(p, opts)?,
        Scenario::RotationAudit(p) => run_rotation_audit(p, opts)?,
        Scenario::AbsorberConvergence(p) => run_absorber_convergence(p, opts)?,
    };
    echo(
        &mut summary.params,
        "tolerance_scale",
        &opts.tolerance_scale,
    );
    if let Some(seed) = opts.seed_override {
        echo(&mut summary.params, "seed_override", &seed);
    }
    summary.write(&opts.out_dir)?;
    summary.record_artifact("summary.json");
    Ok(summary)
}

fn params_json<T: serde::Serialize>(params: &T) -> BTreeMap<String, serde_json::Value> {
    match serde_json::to_value(params).expect("parameters are plain data") {
        serde_json::Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}

fn emit_pattern(
    scan: &PatternScan,
    stem: &str,
    out_dir: &Path,
    summary: &mut RunSummary,
) -> Result<()> {
    let csv = format!("{stem}.csv");
    let sidecar = format!("{stem}.meta.json");
    let plot = format!("{stem}.dat");
    scan.write_csv(&out_dir.join(&csv))?;
    scan.write_sidecar(&out_dir.join(&sidecar))?;
    let points: Vec<(f64, f64)> = scan
        .grid
        .iter()
        .copied()
        .zip(scan.values.iter().copied())
        .collect();
    write_plotdata(out_dir, &plot, &points)?;
    summary.record_artifact(&csv);
    summary.record_artifact(&sidecar);
    summary.record_artifact(&plot);
    Ok(())
}

fn run_noon_compare(
    p: &crate::scenario::NoonCompareParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("noon_compare", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = context_from(&p.wavelength, p.eta)?;
    let quad = QuadratureSpec::default();
    let mode = ModeSpectrum::gaussian(p.kappa0, p.delta_kappa)?;
    let noon = MomentumAmplitude::noon(mode.clone(), p.n_photons)?;
    let classical = MomentumAmplitude::classical(mode, p.n_photons)?;
    let grid = symmetric_grid(p.half_width, p.grid_points);

    let scan_noon = absorption_pattern(&noon, &grid, Regime::Paraxial, &ctx, &quad)?;
    let scan_classical = absorption_pattern(&classical, &grid, Regime::Paraxial, &ctx, &quad)?;
    emit_pattern(&scan_noon, "pattern_noon", &opts.out_dir, &mut summary)?;
    emit_pattern(
        &scan_classical,
        "pattern_classical",
        &opts.out_dir,
        &mut summary,
    )?;

    // peaks through the analytic envelope path at x = 0
    let peak_noon = absorption_rate_at(&noon, 0.0, Regime::Paraxial, &ctx, &quad)?;
    let peak_classical = absorption_rate_at(&classical, 0.0, Regime::Paraxial, &ctx, &quad)?;
    let expected_ratio = 2.0_f64.powi(p.n_photons as i32 - 1);
    summary.push_check(CheckResult::abs_diff(
        "peak_ratio",
        peak_classical / peak_noon,
        expected_ratio,
        1e-6 * expected_ratio * ts,
    ));

    let n = p.n_photons as f64;
    if let Some(period) = fringe_metrics(&scan_noon).period {
        let expected = PI / (n * p.kappa0);
        summary.push_check(CheckResult::abs_diff(
            "period_noon",
            period,
            expected,
            0.01 * expected * ts,
        ));
    }
    if let Some(period) = fringe_metrics(&scan_classical).period {
        let expected = PI / p.kappa0;
        summary.push_check(CheckResult::abs_diff(
            "period_classical",
            period,
            expected,
            0.01 * expected * ts,
        ));
    }

    // shared envelope: divide out the fringe factors away from their nulls
    let norm = factorial(p.n_photons) * ctx.eta().powi(p.n_photons as i32);
    let mut worst = 0.0_f64;
    for (&x, (&v_n, &v_c)) in grid
        .iter()
        .zip(scan_noon.values.iter().zip(&scan_classical.values))
    {
        let cos_n = (n * p.kappa0 * x).cos();
        let cos_c = (p.kappa0 * x).cos();
        if cos_n.abs() < 0.2 || cos_c.abs() < 0.2 {
            continue;
        }
        let env_n = v_n / (2.0 * norm * cos_n * cos_n);
        let env_c =
            v_c / (2.0_f64.powi(p.n_photons as i32) * norm * cos_c.powi(2 * p.n_photons as i32));
        if env_c > 1e-12 * scan_noon.peak() {
            worst = worst.max((env_n / env_c - 1.0).abs());
        }
    }
    summary.push_check(CheckResult::upper_bound(
        "envelope_agreement_rel",
        worst,
        0.0,
        1e-6 * ts,
    ));
    Ok(summary)
}

fn run_gaussian_tradeoff(
    p: &crate::scenario::GaussianTradeoffParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("gaussian_tradeoff", params_json(p));
    let ts = opts.tolerance_scale;
    for &n in &p.n_values {
        let sqrt_n = (n as f64).sqrt();
        let mut rows = Vec::with_capacity(p.r_points);
        let mut peak_curve = Vec::with_capacity(p.r_points);
        let mut total_curve = Vec::with_capacity(p.r_points);
        let mut worst_identity = 0.0_f64;
        for i in 1..=p.r_points {
            let r = sqrt_n * i as f64 / (p.r_points + 1) as f64;
            let total = normalized_total_rate(n, r)?;
            let peak = normalized_peak_rate(n, r)?;
            worst_identity = worst_identity.max((peak - r * total).abs());
            rows.push(vec![r, peak, total]);
            peak_curve.push((r, peak));
            total_curve.push((r, total));
        }
        let csv = write_csv(
            &opts.out_dir,
            &format!("tradeoff_n{n}.csv"),
            "r,peak_rate,total_rate",
            &rows,
        )?;
        summary.record_artifact(&csv);
        let f = write_plotdata(&opts.out_dir, &format!("peak_rate_n{n}.dat"), &peak_curve)?;
        summary.record_artifact(&f);
        let f = write_plotdata(&opts.out_dir, &format!("total_rate_n{n}.dat"), &total_curve)?;
        summary.record_artifact(&f);

        summary.push_check(CheckResult::abs_diff(
            &format!("peak_at_unit_reduction_n{n}"),
            normalized_peak_rate(n, 1.0)?,
            1.0,
            1e-12 * ts,
        ));
        summary.push_check(CheckResult::upper_bound(
            &format!("peak_near_edge_n{n}"),
            normalized_peak_rate(n, sqrt_n * (1.0 - 1e-9))?,
            0.0,
            1e-3 * ts,
        ));
        summary.push_check(CheckResult::upper_bound(
            &format!("peak_equals_r_times_total_n{n}"),
            worst_identity,
            0.0,
            1e-12 * ts,
        ));
    }
    summary.push_check(CheckResult::abs_diff(
        &format!("zero_spot_total_limit_n{}", p.limit_check_n),
        total_rate_zero_spot_limit(p.limit_check_n)?,
        1.6445,
        5e-4 * ts,
    ));
    Ok(summary)
}

fn run_gaussian_pattern(
    p: &crate::scenario::GaussianPatternParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("gaussian_pattern", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = context_from(&p.wavelength, p.eta)?;
    let quad = QuadratureSpec::default();
    let params = GaussianParams::new(p.n_photons, p.b_param, p.beta_param)?;
    let amp = MomentumAmplitude::jointly_gaussian(params);
    let grid = symmetric_grid(p.half_width, p.grid_points);
    let scan = absorption_pattern(&amp, &grid, Regime::Paraxial, &ctx, &quad)?;
    emit_pattern(&scan, "pattern", &opts.out_dir, &mut summary)?;

    // pipeline pattern vs the closed form, relative to the peak
    let peak = params.analytic_pattern(0.0, ctx.eta());
    let mut worst = 0.0_f64;
    for (&x, &v) in grid.iter().zip(&scan.values) {
        worst = worst.max((v - params.analytic_pattern(x, ctx.eta())).abs() / peak);
    }
    summary.push_check(CheckResult::upper_bound(
        "pattern_vs_analytic_rel",
        worst,
        0.0,
        1e-6 * ts,
    ));

    // second-moment width against the closed form
    let nf = p.n_photons as f64;
    let reach = 6.0 / (nf * p.b_param);
    let (m0, _) = qlitho::numerics::integrate_1d_real(
        |x| params.analytic_pattern(x, 1.0),
        (-reach, reach),
        &quad,
    )?;
    let (m2, _) = qlitho::numerics::integrate_1d_real(
        |x| x * x * params.analytic_pattern(x, 1.0),
        (-reach, reach),
        &quad,
    )?;
    let width_quad = (m2 / m0).sqrt();
    summary.push_check(CheckResult::abs_diff(
        "rms_width",
        params.rms_widths().width,
        width_quad,
        1e-8 * width_quad * ts,
    ));

    // normalization of the momentum amplitude
    let plan = RandomPlan::new(p.seed, p.mc_samples);
    let spec = QuadratureSpec::default().with_points_per_dim(224);
    let check = verify_normalization(&amp, &spec, &plan)?;
    let tolerance = match check.method {
        NormMethod::MonteCarlo => 3.0 * check.std_error.unwrap_or(0.0) + 1e-12,
        _ => 1e-6 * ts,
    };
    summary.push_check(CheckResult::abs_diff(
        "normalization",
        check.value,
        1.0,
        tolerance,
    ));
    Ok(summary)
}

fn run_double_slit_angular(
    p: &crate::scenario::DoubleSlitAngularParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("double_slit_angular", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = context_from(&p.wavelength, 1.0)?;
    let quad = QuadratureSpec::default();
    let exp = SlitExperiment::new(
        p.slit_width,
        p.slit_spacing,
        p.coherence_length,
        p.epsilon,
        parse_corr_shape(&p.corr_shape)?,
        ctx,
    )?;
    let lambda = ctx.wavelength();
    let theta_null = lambda / (4.0 * p.slit_spacing);
    let theta_max = p.theta_range_nulls * theta_null;
    let step = 2.0 * theta_max / (p.theta_points - 1) as f64;

    let mut rows = Vec::with_capacity(p.theta_points);
    let mut curve = Vec::with_capacity(p.theta_points);
    let mut evenness = 0.0_f64;
    let mut rate_peak = 0.0_f64;
    for i in 0..p.theta_points {
        let theta = -theta_max + step * i as f64;
        let rate = exp.angular_coincidence(theta);
        evenness = evenness.max((rate - exp.angular_coincidence(-theta)).abs());
        rate_peak = rate_peak.max(rate);
        rows.push(vec![theta, rate]);
        curve.push((theta, rate));
    }
    let f = write_csv(&opts.out_dir, "angular.csv", "theta,rate", &rows)?;
    summary.record_artifact(&f);
    let f = write_plotdata(&opts.out_dir, "angular.dat", &curve)?;
    summary.record_artifact(&f);
    let sidecar = serde_json::json!({
        "slit_width": p.slit_width,
        "slit_spacing": p.slit_spacing,
        "coherence_length": p.coherence_length,
        "epsilon": p.epsilon,
        "corr_shape": p.corr_shape,
        "wavelength": lambda,
        "theta_points": p.theta_points,
    });
    std::fs::write(
        opts.out_dir.join("angular.meta.json"),
        serde_json::to_string_pretty(&sidecar)? + "\n",
    )?;
    summary.record_artifact("angular.meta.json");

    // first null position to grid precision
    let mut best = (f64::NAN, f64::INFINITY);
    for row in &rows {
        let theta = row[0];
        if theta > 0.5 * theta_null && theta < 1.5 * theta_null && row[1] < best.1 {
            best = (theta, row[1]);
        }
    }
    summary.push_check(CheckResult::abs_diff(
        "first_null_theta",
        best.0,
        theta_null,
        step * ts,
    ));
    summary.push_check(CheckResult::upper_bound(
        "evenness",
        evenness / rate_peak.max(f64::MIN_POSITIVE),
        0.0,
        1e-12 * ts,
    ));

    // Fourier duality between the near field and the closed momentum form
    let peak = exp.momentum(0.0, 0.0).norm();
    let mut worst_duality = 0.0_f64;
    let k_max = 2.0 * PI * theta_max / lambda;
    for i in -10..=10_i64 {
        for j in -10..=10_i64 {
            let k1 = k_max * i as f64 / 10.0;
            let k2 = k_max * j as f64 / 10.0;
            let closed = exp.momentum(k1, k2);
            let numeric = exp.momentum_numeric(k1, k2, &quad)?;
            worst_duality = worst_duality.max((closed - numeric).norm() / peak);
        }
    }
    summary.push_check(CheckResult::upper_bound(
        "fourier_duality_rel",
        worst_duality,
        0.0,
        1e-6 * ts,
    ));
    Ok(summary)
}

fn run_double_slit_alpha_scan(
    p: &crate::scenario::DoubleSlitAlphaScanParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("double_slit_alpha_scan", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = context_from(&p.wavelength, 1.0)?;
    let quad = QuadratureSpec::default();
    let lambda = ctx.wavelength();
    let theta = p.theta_in_nulls * lambda / (4.0 * p.slit_spacing);

    let mut closed = Vec::new();
    let mut pipeline = Vec::new();
    let mut rows = Vec::new();
    for &frac in &p.alpha_over_a {
        let alpha = frac * p.slit_width;
        let exp = SlitExperiment::new(
            p.slit_width,
            p.slit_spacing,
            alpha,
            p.epsilon,
            parse_corr_shape(&p.corr_shape)?,
            ctx,
        )?;
        let rate = exp.angular_coincidence(theta);
        let numeric = exp.angular_coincidence_numeric(theta, &quad)?;
        closed.push((alpha, rate));
        pipeline.push((alpha, numeric));
        rows.push(vec![alpha, rate, numeric]);
    }
    let f = write_csv(
        &opts.out_dir,
        "alpha_scan.csv",
        "alpha,rate_closed,rate_pipeline",
        &rows,
    )?;
    summary.record_artifact(&f);
    let f = write_plotdata(&opts.out_dir, "alpha_scan.dat", &closed)?;
    summary.record_artifact(&f);

    let (slope, r2_closed) = linear_fit_through_origin(&closed);
    echo(&mut summary.params, "fitted_slope", &slope);
    summary.push_check(CheckResult::upper_bound(
        "closed_form_nonlinearity",
        1.0 - r2_closed,
        0.0,
        1e-10 * ts,
    ));
    let (_, r2_pipeline) = linear_fit_through_origin(&pipeline);
    summary.push_check(CheckResult::abs_diff(
        "pipeline_fit_r2",
        r2_pipeline,
        1.0,
        1e-3 * ts,
    ));
    // doubling the coherence length doubles the rate
    if closed.len() >= 2 {
        let (a0, r0) = closed[0];
        let target = 2.0 * a0;
        if let Some(&(_, r1)) = closed
            .iter()
            .find(|(a, _)| (a - target).abs() <= 1e-12 * target)
        {
            summary.push_check(CheckResult::abs_diff(
                "rate_doubles_with_alpha",
                r1 / r0,
                2.0,
                1e-10 * ts,
            ));
        }
    }
    Ok(summary)
}

fn run_bound_audit(p: &crate::scenario::BoundAuditParams, opts: &RunOptions) -> Result<RunSummary> {
    let mut summary = RunSummary::new("bound_audit", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = context_from(&p.wavelength, p.eta)?;
    let quad = QuadratureSpec::default();
    let mut rng = CounterRng::from_seed(p.seed);
    let mut rows = Vec::new();
    let mut worst_fraction = 0.0_f64;
    let mut draws = 0usize;
    while draws < p.draws {
        let kind = draws % 4;
        let (amp, half_width): (MomentumAmplitude, f64) = match kind {
            0 | 1 => {
                let dk = rng.uniform(0.05, 0.3) * ctx.kappa_max() / (2.0 * PI);
                let k0 = dk * rng.uniform(5.0, 10.0);
                let n = 1 + (rng.next_u64() % 4) as usize;
                let mode = ModeSpectrum::gaussian(k0, dk)?;
                let amp = if kind == 0 {
                    MomentumAmplitude::noon(mode, n)?
                } else {
                    MomentumAmplitude::classical(mode, n)?
                };
                (amp, 2.5 / dk)
            }
            2 => {
                let n = 1 + (rng.next_u64() % 4) as usize;
                let scale = ctx.kappa_max() / (2.0 * PI);
                let b = rng.uniform(0.1, 1.5) * scale;
                let beta = rng.uniform(0.1, 1.5) * scale;
                let params = GaussianParams::new(n, b, beta)?;
                (
                    MomentumAmplitude::jointly_gaussian(params),
                    3.0 / (n as f64 * b),
                )
            }
            _ => {
                let lambda = ctx.wavelength();
                let a = rng.uniform(2.0, 8.0) * lambda;
                let b = a * rng.uniform(2.0, 4.0);
                let alpha = a * rng.uniform(0.02, 0.1);
                let eps = rng.uniform(0.01, 0.3);
                let exp = SlitExperiment::new(
                    a,
                    b,
                    alpha,
                    eps,
                    qlitho::double_slit::CorrelationShape::Gaussian,
                    ctx,
                )?;
                (MomentumAmplitude::biphoton_slit(exp), 0.6 * (b + a))
            }
        };
        let points = match qlitho::absorption::expected_fringe_period(&amp) {
            Some(period) => ((2.0 * half_width / (period / 10.0)).ceil() as usize).max(101),
            None => 101,
        };
        let grid = symmetric_grid(half_width, points);
        let scan = absorption_pattern(&amp, &grid, Regime::Paraxial, &ctx, &quad)?;
        let bound = schwarz_bound_density(&ctx, amp.n_photons())?;
        let fraction = scan.peak() / bound;
        worst_fraction = worst_fraction.max(fraction);
        rows.push(vec![
            draws as f64,
            amp.n_photons() as f64,
            scan.peak(),
            bound,
            fraction,
        ]);
        draws += 1;
    }
    let f = write_csv(
        &opts.out_dir,
        "bound_audit.csv",
        "draw,n_photons,peak_rate,rate_bound,fraction",
        &rows,
    )?;
    summary.record_artifact(&f);
    summary.push_check(CheckResult::upper_bound(
        "max_peak_over_bound",
        worst_fraction,
        1.0,
        1e-9 * ts,
    ));
    Ok(summary)
}

fn run_rotation_audit(
    p: &crate::scenario::RotationAuditParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("rotation_audit", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = OpticalContext::dimensionless();
    let km = ctx.kappa_max();

    // geometric-factor curve over the numerical aperture
    let mut curve = Vec::with_capacity(p.na_curve_points);
    let mut rows = Vec::with_capacity(p.na_curve_points);
    for i in 0..p.na_curve_points {
        let na = p.na_max * i as f64 / (p.na_curve_points - 1) as f64;
        let g = geometric_factor(na * km, &ctx)?;
        curve.push((na, g));
        rows.push(vec![na, g]);
    }
    let f = write_csv(&opts.out_dir, "gamma_curve.csv", "na,gamma", &rows)?;
    summary.record_artifact(&f);
    let f = write_plotdata(&opts.out_dir, "gamma_curve.dat", &curve)?;
    summary.record_artifact(&f);

    summary.push_check(CheckResult::abs_diff(
        "gamma_at_na_0p8",
        geometric_factor(0.8 * km, &ctx)?,
        1.2910,
        0.005 * ts,
    ));

    let mut rng = CounterRng::from_seed(p.seed);
    let mut checked = 0usize;
    let mut worst_identity = 0.0_f64;
    let mut worst_dispersion = 0.0_f64;
    while checked < p.trials {
        let kappa = rng.uniform(-0.999, 0.999) * km;
        let theta = rng.uniform(-PI / 2.0, PI / 2.0);
        let Ok((kappa_rot, scale)) = rotate_mode(kappa, theta, &ctx) else {
            continue;
        };
        if kappa_rot.abs() >= 0.999 * km {
            continue;
        }
        let ratio = geometric_factor(kappa, &ctx)? / geometric_factor(kappa_rot, &ctx)?;
        worst_identity = worst_identity.max((ratio - scale).abs());
        let kz = ((km - kappa) * (km + kappa)).sqrt();
        let kz_rot = kappa * theta.sin() + kz * theta.cos();
        worst_dispersion = worst_dispersion
            .max(((kappa_rot * kappa_rot + kz_rot * kz_rot) / (km * km) - 1.0).abs());
        checked += 1;
    }
    summary.push_check(CheckResult::upper_bound(
        "rotation_identity_residual",
        worst_identity,
        0.0,
        1e-12 * ts,
    ));
    summary.push_check(CheckResult::upper_bound(
        "dispersion_residual_rel",
        worst_dispersion,
        0.0,
        1e-12 * ts,
    ));
    Ok(summary)
}

fn run_absorber_convergence(
    p: &crate::scenario::AbsorberConvergenceParams,
    opts: &RunOptions,
) -> Result<RunSummary> {
    let mut summary = RunSummary::new("absorber_convergence", params_json(p));
    let ts = opts.tolerance_scale;
    let ctx = OpticalContext::dimensionless();
    let quad = QuadratureSpec::default();
    let bin_quad = QuadratureSpec::default().with_points_per_dim(32);
    let mode = ModeSpectrum::gaussian(p.kappa0, p.delta_kappa)?;
    let amp = MomentumAmplitude::noon(mode, 2)?;
    let period = PI / (2.0 * p.kappa0);
    let xi = p.probe_fraction * period;
    let exact = diagonal_amplitude(&amp, xi, Regime::Paraxial, &ctx, &quad)?.norm_sqr();

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &frac in &p.width_fractions {
        let width = frac * period;
        let scan = discrete_absorber_pattern(
            &amp,
            width,
            &[xi - 0.001, xi, xi + 0.001],
            Regime::Paraxial,
            &ctx,
            &bin_quad,
        )?;
        let density = scan.values[1];
        let err = (density / width - exact).abs();
        rows.push(vec![width, density, err]);
        errors.push(err);
    }
    let f = write_csv(
        &opts.out_dir,
        "absorber_convergence.csv",
        "width,density,rescaled_error",
        &rows,
    )?;
    summary.record_artifact(&f);

    for (i, pair) in errors.windows(2).enumerate() {
        summary.push_check(CheckResult::abs_diff(
            &format!("halving_ratio_{}", i + 1),
            pair[0] / pair[1],
            4.0,
            0.8 * ts,
        ));
    }
    Ok(summary)
}
