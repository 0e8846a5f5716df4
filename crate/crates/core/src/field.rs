//! Uniform 1-D grids and wavefunctions sampled on them.

use crate::error::{Error, Result};
use crate::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid `[-half_width, half_width]` with spacing as close to
    /// `h` as an odd point count allows, so that `x = 0` is a node.
    pub fn symmetric(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "need positive half width and spacing, got {half_width}, {h}"
            )));
        }
        let half_cells = (half_width / h).round().max(1.0) as usize;
        GridSpec::new(-half_width, half_width, 2 * half_cells + 1)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let f = ((x - self.x_min) / self.spacing()).round();
        f.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }
}

/// Samples of a wavefunction `psi(x, t)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: GridSpec,
    pub values: Vec<Complex>,
    pub time: f64,
    pub mu: f64,
}

impl ComplexField {
    pub fn new(grid: GridSpec, values: Vec<Complex>, time: f64, mu: f64) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n_points
            )));
        }
        Ok(ComplexField {
            grid,
            values,
            time,
            mu,
        })
    }

    /// Sample `f` at every node, in parallel.
    pub fn from_fn<F>(grid: GridSpec, time: f64, mu: f64, f: F) -> Self
    where
        F: Fn(f64) -> Complex + Sync,
    {
        let values = (0..grid.n_points)
            .into_par_iter()
            .map(|i| f(grid.x(i)))
            .collect();
        ComplexField {
            grid,
            values,
            time,
            mu,
        }
    }

    /// Like [`ComplexField::from_fn`] for fallible samplers.
    pub fn try_from_fn<F>(grid: GridSpec, time: f64, mu: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex> + Sync,
    {
        let values = (0..grid.n_points)
            .into_par_iter()
            .map(|i| f(grid.x(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexField {
            grid,
            values,
            time,
            mu,
        })
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Trapezoid `int |psi|^2 dx`.
    pub fn norm_sqr(&self) -> f64 {
        trapezoid(&self.density(), self.grid.spacing())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Trapezoid `<self | other>`.
    pub fn inner(&self, other: &ComplexField) -> Result<Complex> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let prod: Vec<Complex> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .collect();
        Ok(trapezoid_complex(&prod, self.grid.spacing()))
    }

    /// Cubic Lagrange interpolation from the four surrounding nodes; zero
    /// outside the grid. Stencils never straddle `x = 0` when it is a node,
    /// so the kink of the bound states is not smeared.
    pub fn interpolate(&self, x: f64) -> Complex {
        let g = &self.grid;
        if !g.contains(x) {
            return Complex::new(0.0, 0.0);
        }
        let n = g.n_points;
        if n < 4 {
            let h = g.spacing();
            let i = (((x - g.x_min) / h).floor() as usize).min(n - 2);
            let w = (x - g.x(i)) / h;
            return self.values[i] * (1.0 - w) + self.values[i + 1] * w;
        }
        let h = g.spacing();
        let s = (x - g.x_min) / h;
        let cell = (s.floor() as usize).min(n - 2);
        let mut start = cell.saturating_sub(1).min(n - 4);

        let zero = (-g.x_min / h).round();
        let zero_is_node = ((-g.x_min / h) - zero).abs() < 1e-9 && zero >= 0.0 && zero < n as f64;
        if zero_is_node {
            let z = zero as usize;
            if z > start && z < start + 3 {
                // shift the stencil to the side of the kink that holds x
                start = if cell >= z { z.min(n - 4) } else { z.saturating_sub(3) };
            }
        }

        let mut acc = Complex::new(0.0, 0.0);
        for j in start..start + 4 {
            let mut w = 1.0;
            for k in start..start + 4 {
                if k != j {
                    w *= (s - k as f64) / (j as f64 - k as f64);
                }
            }
            acc += self.values[j] * w;
        }
        acc
    }
}

pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}

pub fn trapezoid_complex(values: &[Complex], h: f64) -> Complex {
    let n = values.len();
    if n < 2 {
        return Complex::new(0.0, 0.0);
    }
    (values.iter().sum::<Complex>() - (values[0] + values[n - 1]) * 0.5) * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 1).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 3).is_err());
        let g = GridSpec::new(-10.0, 10.0, 2001).unwrap();
        assert!((g.spacing() - 0.01).abs() < 1e-15);
        assert_eq!(g.x(2000), 10.0);
        assert_eq!(g.nearest_index(0.0), 1000);
        assert_eq!(g.x(1000), 0.0);
    }

    #[test]
    fn symmetric_grid_has_node_at_origin() {
        let g = GridSpec::symmetric(60.0, 0.005).unwrap();
        assert_eq!(g.n_points, 24_001);
        assert_eq!(g.x(g.nearest_index(0.0)), 0.0);
    }

    #[test]
    fn field_length_checked() {
        let g = GridSpec::new(0.0, 1.0, 3).unwrap();
        assert!(ComplexField::new(g, vec![Complex::new(0.0, 0.0); 2], 0.0, 1.0).is_err());
    }

    #[test]
    fn interpolation_respects_kink() {
        let g = GridSpec::symmetric(20.0, 0.01).unwrap();
        let f = ComplexField::from_fn(g, 0.0, 1.0, |x| Complex::new((-x.abs()).exp(), 0.0));
        for &x in &[-0.013, -0.004, 0.0031, 0.0157, 1.234_567, -7.654_321] {
            let want = (-f64::abs(x)).exp();
            assert!((f.interpolate(x).re - want).abs() < 1e-9, "x = {x}");
        }
        assert_eq!(f.interpolate(25.0), Complex::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_and_norm() {
        let g = GridSpec::symmetric(30.0, 0.01).unwrap();
        let f = ComplexField::from_fn(g, 0.0, 1.0, |x| Complex::from_polar((-x.abs()).exp(), x));
        assert!((f.norm_sqr() - 1.0).abs() < 1e-4);
        let ip = f.inner(&f).unwrap();
        assert!((ip.re - f.norm_sqr()).abs() < 1e-14 && ip.im.abs() < 1e-14);
    }
}
