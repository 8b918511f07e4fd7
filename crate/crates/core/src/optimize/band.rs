use rayon::prelude::*;
use serde::Serialize;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

use super::golden::golden_section;

/// Spectrum as a function of the free parameters and Ω.
pub type SpectrumFn = dyn Fn(&[f64], f64) -> Density + Send + Sync;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamRange {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl ParamRange {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            lo,
            hi,
        }
    }
}

/// Weighted mean of a parameterized spectrum over a frequency band.
pub struct BandObjective {
    grid: FrequencyGrid,
    weights: Vec<f64>,
    params: Vec<ParamRange>,
    spectrum: Box<SpectrumFn>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandValue {
    pub value: f64,
    /// Grid points dropped because the spectrum is degenerate there.
    pub excluded: Vec<f64>,
}

impl BandObjective {
    /// `weights` are normalized to sum to one; `None` means uniform.
    pub fn new(
        grid: FrequencyGrid,
        weights: Option<Vec<f64>>,
        params: Vec<ParamRange>,
        spectrum: Box<SpectrumFn>,
    ) -> Result<Self> {
        let weights = weights.unwrap_or_else(|| vec![1.0; grid.len()]);
        if weights.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} weights for {} grid points",
                weights.len(),
                grid.len()
            )));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "weight",
                value: w,
                reason: "weights must be finite and >= 0",
            });
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "weight",
                value: total,
                reason: "weights must not all be zero",
            });
        }
        if params.is_empty() {
            return Err(Error::InvalidParameter {
                name: "params",
                value: 0.0,
                reason: "at least one free parameter is required",
            });
        }
        for p in &params {
            if !(p.lo.is_finite() && p.hi.is_finite() && p.lo <= p.hi) {
                return Err(Error::InvalidParameter {
                    name: "range",
                    value: p.hi - p.lo,
                    reason: "range bounds must be finite with lo <= hi",
                });
            }
        }
        Ok(Self {
            grid,
            weights: weights.iter().map(|w| w / total).collect(),
            params,
            spectrum,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn params(&self) -> &[ParamRange] {
        &self.params
    }

    pub fn evaluate(&self, x: &[f64]) -> BandValue {
        let values: Vec<Density> = self
            .grid
            .points()
            .par_iter()
            .map(|&w| (self.spectrum)(x, w))
            .collect();
        // summed in grid order so the result does not depend on threading
        let mut acc = 0.0;
        let mut weight = 0.0;
        let mut excluded = Vec::new();
        for ((density, &w), &omega) in values.iter().zip(&self.weights).zip(self.grid.points()) {
            match density {
                Density::Finite(v) if v.is_finite() => {
                    acc += w * v;
                    weight += w;
                }
                _ => excluded.push(omega),
            }
        }
        let value = if weight > 0.0 {
            acc / weight
        } else {
            f64::INFINITY
        };
        BandValue { value, excluded }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentOptions {
    pub sweeps: usize,
    /// Golden-section stopping width, relative to each parameter's range.
    pub rel_tol: f64,
    /// Starting point; range midpoints when absent.
    pub start: Option<Vec<f64>>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            sweeps: 3,
            rel_tol: 1e-6,
            start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandOptimum {
    pub params: Vec<(String, f64)>,
    pub objective: f64,
    pub excluded: Vec<f64>,
}

impl BandOptimum {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Coordinate descent: each sweep minimizes every parameter in turn by
/// golden section over its full range, holding the others fixed.
pub fn minimize_band(obj: &BandObjective, options: &DescentOptions) -> Result<BandOptimum> {
    let mut x: Vec<f64> = match &options.start {
        Some(s) if s.len() == obj.params.len() => s
            .iter()
            .zip(&obj.params)
            .map(|(v, p)| v.clamp(p.lo, p.hi))
            .collect(),
        Some(s) => {
            return Err(Error::InvalidParameter {
                name: "start",
                value: s.len() as f64,
                reason: "start point must have one value per parameter",
            })
        }
        None => obj.params.iter().map(|p| 0.5 * (p.lo + p.hi)).collect(),
    };
    let mut best = obj.evaluate(&x).value;

    for _ in 0..options.sweeps.max(1) {
        for i in 0..x.len() {
            let range = &obj.params[i];
            if range.hi == range.lo {
                continue;
            }
            let mut trial = x.clone();
            let found = golden_section(
                |v| {
                    trial[i] = v;
                    obj.evaluate(&trial).value
                },
                range.lo,
                range.hi,
                options.rel_tol * (range.hi - range.lo),
            );
            if found.value <= best {
                best = found.value;
                x[i] = found.x;
            }
        }
    }

    let final_value = obj.evaluate(&x);
    if !final_value.value.is_finite() {
        return Err(Error::DegenerateBand {
            omegas: final_value.excluded,
        });
    }
    if !final_value.excluded.is_empty() {
        log::info!(
            "band objective excluded {} degenerate point(s): {:?}",
            final_value.excluded.len(),
            final_value.excluded
        );
    }
    Ok(BandOptimum {
        params: obj
            .params
            .iter()
            .zip(&x)
            .map(|(p, v)| (p.name.clone(), *v))
            .collect(),
        objective: final_value.value,
        excluded: final_value.excluded,
    })
}
