use serde::Serialize;

use crate::error::{invalid, Result};

const VOLUME_TOL: f64 = 1e-9;

/// Finite quadrature grid on a box `Π [lower_i, upper_i]` of parameter space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamGrid {
    lower: Vec<f64>,
    upper: Vec<f64>,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl ParamGrid {
    /// Validates that every point lies in the box and that the weights are
    /// positive and add up to its volume.
    pub fn new(
        lower: Vec<f64>,
        upper: Vec<f64>,
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let d = lower.len();
        if d == 0 || upper.len() != d {
            return Err(invalid("box bounds must share a nonzero dimension"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l.is_finite() && u.is_finite() && l < u)) {
            return Err(invalid("box bounds must be finite with lower < upper"));
        }
        if points.is_empty() || points.len() != weights.len() {
            return Err(invalid("grid needs one weight per point and at least one point"));
        }
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != d {
                return Err(invalid(format!("grid point {i} has dimension {}, expected {d}", pt.len())));
            }
            if pt.iter().zip(lower.iter().zip(&upper)).any(|(x, (l, u))| !(x >= l && x <= u)) {
                return Err(invalid(format!("grid point {i} lies outside the box")));
            }
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid("quadrature weights must be positive"));
        }
        let volume: f64 = lower.iter().zip(&upper).map(|(l, u)| u - l).product();
        let total: f64 = weights.iter().sum();
        if (total - volume).abs() > VOLUME_TOL {
            return Err(invalid(format!(
                "quadrature weights sum to {total}, box volume is {volume}"
            )));
        }
        Ok(ParamGrid {
            lower,
            upper,
            points,
            weights,
        })
    }

    /// `count` equally spaced points from `first` to `last`, each the centre
    /// of a cell of width `(last − first)/(count − 1)`. A single point gets a
    /// unit cell.
    pub fn regular_1d(first: f64, last: f64, count: usize) -> Result<Self> {
        if count == 0 || !first.is_finite() || !last.is_finite() {
            return Err(invalid("regular grid needs finite ends and at least one point"));
        }
        if count == 1 {
            if first != last {
                return Err(invalid("a one-point grid needs first == last"));
            }
            return Self::new(vec![first - 0.5], vec![first + 0.5], vec![vec![first]], vec![1.0]);
        }
        if !(last > first) {
            return Err(invalid("regular grid needs first < last"));
        }
        let h = (last - first) / (count - 1) as f64;
        let points = (0..count)
            .map(|i| {
                let x = if i + 1 == count { last } else { first + h * i as f64 };
                vec![x]
            })
            .collect();
        Self::new(
            vec![first - 0.5 * h],
            vec![last + 0.5 * h],
            points,
            vec![h; count],
        )
    }

    pub fn dim_theta(&self) -> usize {
        self.lower.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    /// Constant density `1/volume`.
    pub fn uniform_density(&self) -> Vec<f64> {
        vec![1.0 / self.weights.iter().sum::<f64>(); self.len()]
    }

    /// Density putting all prior mass on grid point `i`.
    pub fn point_mass_density(&self, i: usize) -> Result<Vec<f64>> {
        if i >= self.len() {
            return Err(invalid(format!("grid index {i} out of range")));
        }
        let mut d = vec![0.0; self.len()];
        d[i] = 1.0 / self.weights[i];
        Ok(d)
    }

    /// Checks that `density` is nonnegative and integrates to 1.
    pub fn check_density(&self, density: &[f64]) -> Result<()> {
        crate::error::check_dims(density.len(), self.len())?;
        if density.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(invalid("prior density must be finite and nonnegative"));
        }
        let mass = self.integrate(density);
        if (mass - 1.0).abs() > VOLUME_TOL {
            return Err(invalid(format!("prior density integrates to {mass}, expected 1")));
        }
        Ok(())
    }

    /// `Σ_i f_i w_i`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }
}
