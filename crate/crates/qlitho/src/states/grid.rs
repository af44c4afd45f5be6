//! Custom momentum amplitudes sampled on uniform tensor grids, with a
//! documented CSV interchange format.
//!
//! File layout (one record per line):
//!
//! ```text
//! qlitho-grid,v1
//! n_photons,<N>
//! axis,<lo>,<hi>,<points>      (N lines, one per dimension)
//! values,re,im
//! <re>,<im>                    (row-major, points_1 * ... * points_N lines)
//! ```

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One uniform grid axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "axis bounds must be finite with lo < hi, got ({lo}, {hi})"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidArgument(format!(
                "axis needs at least 2 points, got {points}"
            )));
        }
        Ok(Self { lo, hi, points })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn node(&self, index: usize) -> f64 {
        self.lo + self.spacing() * index as f64
    }
}

/// A complex amplitude sampled on a uniform tensor grid (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct GridAmplitude {
    axes: Vec<AxisSpec>,
    values: Vec<Complex64>,
}

impl GridAmplitude {
    pub fn new(axes: Vec<AxisSpec>, values: Vec<Complex64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument(
                "grid needs at least one axis".into(),
            ));
        }
        let expected: usize = axes.iter().map(|a| a.points).product();
        if values.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "grid expects {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self { axes, values })
    }

    pub fn from_fn(axes: Vec<AxisSpec>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let total: usize = axes.iter().map(|a| a.points).product();
        let dim = axes.len();
        let mut values = Vec::with_capacity(total);
        let mut point = vec![0.0; dim];
        let mut index = vec![0usize; dim];
        for flat in 0..total {
            let mut rem = flat;
            for d in (0..dim).rev() {
                index[d] = rem % axes[d].points;
                rem /= axes[d].points;
            }
            for d in 0..dim {
                point[d] = axes[d].node(index[d]);
            }
            values.push(f(&point));
        }
        Self::new(axes, values)
    }

    pub fn n_dims(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn total_points(&self) -> usize {
        self.values.len()
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        let mut flat = 0usize;
        for (d, &i) in index.iter().enumerate() {
            flat = flat * self.axes[d].points + i;
        }
        flat
    }

    pub fn value_at(&self, index: &[usize]) -> Complex64 {
        self.values[self.flat_index(index)]
    }

    pub fn set_value(&mut self, index: &[usize], value: Complex64) {
        let flat = self.flat_index(index);
        self.values[flat] = value;
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }

    /// Multilinear interpolation; zero outside the grid.
    pub fn interpolate(&self, point: &[f64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.n_dims());
        let dim = self.n_dims();
        let mut cell = vec![0usize; dim];
        let mut frac = vec![0.0; dim];
        for d in 0..dim {
            let ax = &self.axes[d];
            if point[d] < ax.lo || point[d] > ax.hi {
                return Complex64::default();
            }
            let t = (point[d] - ax.lo) / ax.spacing();
            let i = (t.floor() as usize).min(ax.points - 2);
            cell[d] = i;
            frac[d] = t - i as f64;
        }
        let mut acc = Complex64::default();
        let corners = 1usize << dim;
        let mut index = vec![0usize; dim];
        for corner in 0..corners {
            let mut weight = 1.0;
            for d in 0..dim {
                if corner & (1 << d) != 0 {
                    index[d] = cell[d] + 1;
                    weight *= frac[d];
                } else {
                    index[d] = cell[d];
                    weight *= 1.0 - frac[d];
                }
            }
            if weight != 0.0 {
                acc += self.value_at(&index) * weight;
            }
        }
        acc
    }

    /// `int |phi|^2` over the grid with trapezoidal end weights per axis.
    pub fn squared_norm(&self) -> f64 {
        let dim = self.n_dims();
        let total = self.total_points();
        let mut sum = 0.0;
        let mut index = vec![0usize; dim];
        for flat in 0..total {
            let mut rem = flat;
            for d in (0..dim).rev() {
                index[d] = rem % self.axes[d].points;
                rem /= self.axes[d].points;
            }
            let mut w = 1.0;
            for (&i, ax) in index.iter().zip(&self.axes) {
                let edge = i == 0 || i + 1 == ax.points;
                w *= if edge { 0.5 } else { 1.0 } * ax.spacing();
            }
            sum += w * self.values[flat].norm_sqr();
        }
        sum
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        writeln!(file, "qlitho-grid,v1")?;
        writeln!(file, "n_photons,{}", self.n_dims())?;
        for ax in &self.axes {
            writeln!(file, "axis,{:.17e},{:.17e},{}", ax.lo, ax.hi, ax.points)?;
        }
        writeln!(file, "values,re,im")?;
        for v in &self.values {
            writeln!(file, "{:.17e},{:.17e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut lines = reader.lines().enumerate();

        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, Ok(line))) => Ok((i + 1, line)),
                Some((i, Err(e))) => Err(Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                }),
                None => Err(Error::Parse {
                    line: 0,
                    message: format!("unexpected end of file, expected {expect}"),
                }),
            }
        };

        let (line_no, header) = next_line("header")?;
        if header.trim() != "qlitho-grid,v1" {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unrecognized header `{header}`"),
            });
        }

        let (line_no, n_line) = next_line("n_photons")?;
        let n: usize = n_line
            .trim()
            .strip_prefix("n_photons,")
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse {
                line: line_no,
                message: format!("expected `n_photons,<N>`, got `{n_line}`"),
            })?;

        let mut axes = Vec::with_capacity(n);
        for _ in 0..n {
            let (line_no, axis_line) = next_line("axis")?;
            let parts: Vec<&str> = axis_line.trim().split(',').collect();
            let parsed = (|| -> Option<AxisSpec> {
                if parts.len() != 4 || parts[0] != "axis" {
                    return None;
                }
                AxisSpec::new(
                    parts[1].parse().ok()?,
                    parts[2].parse().ok()?,
                    parts[3].parse().ok()?,
                )
                .ok()
            })();
            axes.push(parsed.ok_or(Error::Parse {
                line: line_no,
                message: format!("expected `axis,<lo>,<hi>,<points>`, got `{axis_line}`"),
            })?);
        }

        let (line_no, values_header) = next_line("values header")?;
        if values_header.trim() != "values,re,im" {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `values,re,im`, got `{values_header}`"),
            });
        }

        let total: usize = axes.iter().map(|a| a.points).product();
        let mut values = Vec::with_capacity(total);
        for _ in 0..total {
            let (line_no, row) = next_line("value row")?;
            let mut parts = row.trim().split(',');
            let parse = |s: Option<&str>| -> Option<f64> { s.and_then(|t| t.parse().ok()) };
            match (parse(parts.next()), parse(parts.next())) {
                (Some(re), Some(im)) => values.push(Complex64::new(re, im)),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `<re>,<im>`, got `{row}`"),
                    })
                }
            }
        }

        Self::new(axes, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_grid() -> GridAmplitude {
        let ax = AxisSpec::new(-2.0, 2.0, 21).unwrap();
        GridAmplitude::from_fn(vec![ax, ax], |p| {
            Complex64::new(
                (-0.5 * (p[0] * p[0] + p[1] * p[1])).exp(),
                0.1 * p[0] * p[1],
            )
        })
        .unwrap()
    }

    #[test]
    fn interpolation_reproduces_nodes() {
        let g = sample_grid();
        let ax = g.axes()[0];
        for i in [0usize, 7, 20] {
            for j in [3usize, 11] {
                let p = [ax.node(i), ax.node(j)];
                let diff = (g.interpolate(&p) - g.value_at(&[i, j])).norm();
                assert!(diff <= 1e-14 * g.value_at(&[i, j]).norm().max(1.0));
            }
        }
        assert_eq!(g.interpolate(&[5.0, 0.0]), Complex64::default());
    }

    #[test]
    fn scaling_scales_the_squared_norm_quadratically() {
        let mut g = sample_grid();
        let base = g.squared_norm();
        g.scale(2.0);
        assert_relative_eq!(g.squared_norm(), 4.0 * base, max_relative = 1e-12);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        let g = sample_grid();
        g.save_csv(&path).unwrap();
        let loaded = GridAmplitude::load_csv(&path).unwrap();
        assert_eq!(g, loaded);
    }

    #[test]
    fn malformed_files_report_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "qlitho-grid,v1\nn_photons,2\naxis,0,1,oops\n").unwrap();
        match GridAmplitude::load_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
