//! Sideband frequency grids.
//!
//! All frequencies are angular (rad/s). A grid is a non-empty, strictly
//! increasing list of positive frequencies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if let Some(bad) = points.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidGrid(format!(
                "frequency {bad} is not finite and positive"
            )));
        }
        if let Some(pair) = points.windows(2).find(|p| p[1] <= p[0]) {
            return Err(Error::InvalidGrid(format!(
                "frequencies not strictly increasing: {} then {}",
                pair[0], pair[1]
            )));
        }
        Ok(Self { points })
    }

    /// Logarithmically spaced grid including both endpoints.
    pub fn log(min: f64, max: f64, n: usize) -> Result<Self> {
        Self::spaced(min, max, n, Spacing::Log)
    }

    pub fn linear(min: f64, max: f64, n: usize) -> Result<Self> {
        Self::spaced(min, max, n, Spacing::Linear)
    }

    pub fn spaced(min: f64, max: f64, n: usize, spacing: Spacing) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("point count must be >= 1".into()));
        }
        if !(min > 0.0 && min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "bounds must be finite and positive, got [{min}, {max}]"
            )));
        }
        if n == 1 {
            return Self::from_points(vec![min]);
        }
        if max <= min {
            return Err(Error::InvalidGrid(format!(
                "max ({max}) must exceed min ({min})"
            )));
        }
        let last = (n - 1) as f64;
        let points = match spacing {
            Spacing::Log => {
                let (lo, hi) = (min.ln(), max.ln());
                (0..n)
                    .map(|i| match i {
                        0 => min,
                        i if i == n - 1 => max,
                        i => (lo + (hi - lo) * i as f64 / last).exp(),
                    })
                    .collect()
            }
            Spacing::Linear => (0..n)
                .map(|i| match i {
                    0 => min,
                    i if i == n - 1 => max,
                    i => min + (max - min) * i as f64 / last,
                })
                .collect(),
        };
        Self::from_points(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().copied()
    }
}

impl<'a> IntoIterator for &'a FrequencyGrid {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_endpoints() {
        let g = FrequencyGrid::log(0.1, 10.0, 30).unwrap();
        assert_eq!(g.len(), 30);
        assert_eq!(g.min(), 0.1);
        assert_eq!(g.max(), 10.0);
        assert!(g.points().windows(2).all(|p| p[1] > p[0]));
        let ratios: Vec<f64> = g.points().windows(2).map(|p| p[1] / p[0]).collect();
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_grid() {
        let g = FrequencyGrid::linear(1.0, 2.0, 5).unwrap();
        assert_eq!(g.points(), &[1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(FrequencyGrid::from_points(vec![]).is_err());
        assert!(FrequencyGrid::from_points(vec![1.0, 1.0]).is_err());
        assert!(FrequencyGrid::from_points(vec![2.0, 1.0]).is_err());
        assert!(FrequencyGrid::from_points(vec![0.0, 1.0]).is_err());
        assert!(FrequencyGrid::from_points(vec![-1.0]).is_err());
        assert!(FrequencyGrid::log(0.0, 1.0, 10).is_err());
        assert!(FrequencyGrid::log(1.0, 0.5, 10).is_err());
        assert!(FrequencyGrid::log(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn single_point() {
        let g = FrequencyGrid::log(3.0, 3.0, 1).unwrap();
        assert_eq!(g.points(), &[3.0]);
    }
}
