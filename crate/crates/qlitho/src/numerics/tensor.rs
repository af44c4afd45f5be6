//! Tensor-product quadrature over boxes of dimension one to three.
//!
//! Each dimension uses a composite 16-point Gauss-Legendre rule; the error
//! estimate compares against a coarser composite pass. Iteration order is
//! fixed, so results are bit-identical across runs.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::quad::QuadratureSpec;
use crate::error::{Error, Result};

const PANEL_ORDER: usize = 16;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x.abs();
        nodes[n - 1 - i] = x.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
        if n % 2 == 1 && i == n / 2 {
            nodes[i] = 0.0;
        }
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let pk = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Composite nodes/weights for one axis, optionally under the edge-clustering
/// sine map `x = c + h sin(t)`.
fn axis_nodes(lo: f64, hi: f64, panels: usize, edge_clustering: bool) -> (Vec<f64>, Vec<f64>) {
    let (base_x, base_w) = panel_rule();
    let mut xs = Vec::with_capacity(panels * PANEL_ORDER);
    let mut ws = Vec::with_capacity(panels * PANEL_ORDER);
    if edge_clustering {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let t_step = PI / panels as f64;
        for p in 0..panels {
            let t_lo = -0.5 * PI + t_step * p as f64;
            let t_c = t_lo + 0.5 * t_step;
            let t_h = 0.5 * t_step;
            for (x, w) in base_x.iter().zip(base_w) {
                let t = t_c + t_h * x;
                xs.push(c + h * t.sin());
                ws.push(w * t_h * h * t.cos());
            }
        }
    } else {
        let step = (hi - lo) / panels as f64;
        for p in 0..panels {
            let a = lo + step * p as f64;
            let c = a + 0.5 * step;
            let h = 0.5 * step;
            for (x, w) in base_x.iter().zip(base_w) {
                xs.push(c + h * x);
                ws.push(w * h);
            }
        }
    }
    (xs, ws)
}

fn tensor_pass<F>(f: &F, axes: &[(Vec<f64>, Vec<f64>)]) -> Complex64
where
    F: Fn(&[f64]) -> Complex64,
{
    let dim = axes.len();
    let mut point = vec![0.0; dim];
    let mut sum = Complex64::default();
    match dim {
        1 => {
            for (x, w) in axes[0].0.iter().zip(&axes[0].1) {
                point[0] = *x;
                sum += f(&point) * *w;
            }
        }
        2 => {
            for (x0, w0) in axes[0].0.iter().zip(&axes[0].1) {
                point[0] = *x0;
                let mut inner = Complex64::default();
                for (x1, w1) in axes[1].0.iter().zip(&axes[1].1) {
                    point[1] = *x1;
                    inner += f(&point) * *w1;
                }
                sum += inner * *w0;
            }
        }
        3 => {
            for (x0, w0) in axes[0].0.iter().zip(&axes[0].1) {
                point[0] = *x0;
                let mut mid = Complex64::default();
                for (x1, w1) in axes[1].0.iter().zip(&axes[1].1) {
                    point[1] = *x1;
                    let mut inner = Complex64::default();
                    for (x2, w2) in axes[2].0.iter().zip(&axes[2].1) {
                        point[2] = *x2;
                        inner += f(&point) * *w2;
                    }
                    mid += inner * *w1;
                }
                sum += mid * *w0;
            }
        }
        _ => unreachable!("dimension checked by caller"),
    }
    sum
}

/// Integrate over an axis-aligned box of dimension up to three.
///
/// The error estimate is the difference against a coarser composite rule.
pub fn integrate_nd<F>(
    f: F,
    boxes: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)>
where
    F: Fn(&[f64]) -> Complex64,
{
    spec.validate()?;
    let dim = boxes.len();
    if dim == 0 {
        return Err(Error::InvalidArgument("empty integration box".into()));
    }
    if dim > 3 {
        return Err(Error::Capability(format!(
            "tensor quadrature supports at most 3 dimensions, requested {dim}; \
             use a structure-exploiting fast path or Monte Carlo"
        )));
    }
    for &(lo, hi) in boxes {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "invalid box side ({lo}, {hi})"
            )));
        }
    }

    let panels = spec.grid_points_per_dim.div_ceil(PANEL_ORDER).max(1);
    let coarse_panels = (2 * panels / 3).max(1);

    let fine: Vec<_> = boxes
        .iter()
        .map(|&(lo, hi)| axis_nodes(lo, hi, panels, spec.edge_clustering))
        .collect();
    let coarse: Vec<_> = boxes
        .iter()
        .map(|&(lo, hi)| axis_nodes(lo, hi, coarse_panels, spec.edge_clustering))
        .collect();

    let value = tensor_pass(&f, &fine);
    let check = tensor_pass(&f, &coarse);
    Ok((value, (value - check).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        // degree 31 exactness; check a few even powers
        for k in [0usize, 2, 8, 20, 30] {
            let quad: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * xi.powi(k as i32))
                .sum();
            let exact = 2.0 / (k as f64 + 1.0);
            assert_abs_diff_eq!(quad, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn unit_box_volume_is_exact() {
        let spec = QuadratureSpec::default();
        let (v, _) = integrate_nd(|_| Complex64::new(1.0, 0.0), &[(0.0, 1.0); 3], &spec).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn separable_gaussian_product_matches_1d_results() {
        let spec = QuadratureSpec::default().with_points_per_dim(64);
        let g = |x: f64| (-x * x).exp();
        let (one_d, _) =
            integrate_nd(|p| Complex64::new(g(p[0]), 0.0), &[(-6.0, 6.0)], &spec).unwrap();
        let (three_d, _) = integrate_nd(
            |p| Complex64::new(g(p[0]) * g(p[1]) * g(p[2]), 0.0),
            &[(-6.0, 6.0); 3],
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(three_d.re, one_d.re.powi(3), epsilon = 1e-10);
        assert_abs_diff_eq!(one_d.re, PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn dimension_cap() {
        let spec = QuadratureSpec::default();
        let err = integrate_nd(|_| Complex64::default(), &[(0.0, 1.0); 4], &spec).unwrap_err();
        assert!(matches!(err, crate::error::Error::Capability(_)));
    }

    #[test]
    fn edge_clustered_tensor_handles_cone_singularity() {
        let spec = QuadratureSpec::default()
            .with_points_per_dim(64)
            .with_edge_clustering(true);
        let (v, _) = integrate_nd(
            |p| Complex64::new(1.0 / (1.0 - p[0] * p[0]).sqrt(), 0.0),
            &[(-1.0, 1.0)],
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(v.re, PI, epsilon = 1e-10);
    }
}
