//! Two-photon quadrature algebra and the classical carrier.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{self, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Angular frequency of a 1064 nm carrier, rad/s.
pub const OMEGA_1064NM: f64 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / 1.064e-6;

/// Cosine and sine quadrature amplitudes at one sideband frequency.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadratureVector {
    pub c: Complex64,
    pub s: Complex64,
}

impl QuadratureVector {
    pub fn new(c: Complex64, s: Complex64) -> Self {
        Self { c, s }
    }

    pub fn real(c: f64, s: f64) -> Self {
        Self::new(Complex64::new(c, 0.0), Complex64::new(s, 0.0))
    }

    pub fn rotate(self, theta: f64) -> Self {
        rotate(self, theta)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.norm_sqr() + self.s.norm_sqr()
    }

    /// Projection on the homodyne quadrature `c·cosζ + s·sinζ`.
    pub fn project(&self, zeta: f64) -> Complex64 {
        self.c * zeta.cos() + self.s * zeta.sin()
    }
}

impl Add for QuadratureVector {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.c + rhs.c, self.s + rhs.s)
    }
}

impl Mul<f64> for QuadratureVector {
    type Output = Self;

    fn mul(self, k: f64) -> Self {
        Self::new(self.c * k, self.s * k)
    }
}

/// Rotates `(c, s)` by `theta`: `(c cosθ − s sinθ, c sinθ + s cosθ)`.
pub fn rotate(v: QuadratureVector, theta: f64) -> QuadratureVector {
    let (sin, cos) = theta.sin_cos();
    QuadratureVector::new(v.c * cos - v.s * sin, v.c * sin + v.s * cos)
}

/// Classical carrier of the probe beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Carrier {
    /// Mean incident power I₀, W.
    pub power: f64,
    /// Optical frequency ω_o, rad/s.
    pub frequency: f64,
    /// Phase φ of the classical field, rad.
    pub phase: f64,
}

impl Carrier {
    pub fn new(power: f64, frequency: f64, phase: f64) -> Result<Self> {
        error::non_negative("power", power)?;
        error::positive("carrier_frequency", frequency)?;
        error::finite("phase", phase)?;
        Ok(Self {
            power,
            frequency,
            phase,
        })
    }

    /// 1 W at 1064 nm with the given phase. The noise engine only uses the phase.
    pub fn with_phase(phase: f64) -> Self {
        Self {
            power: 1.0,
            frequency: OMEGA_1064NM,
            phase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.power, self.frequency, self.phase).map(|_| ())
    }
}

/// Mean quadrature amplitudes `(A^c, A^s) = √(2I₀/ħω_o)·(cosφ, sinφ)`.
pub fn classical_quadratures(carrier: &Carrier) -> (f64, f64) {
    let amplitude = (2.0 * carrier.power / (HBAR * carrier.frequency)).sqrt();
    let (sin, cos) = carrier.phase.sin_cos();
    (amplitude * cos, amplitude * sin)
}
