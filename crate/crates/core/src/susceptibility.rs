//! Massless mechanical susceptibilities χ(Ω).
//!
//! Inverse susceptibilities carry (rad/s)². No damping is modelled, so
//! χ⁻¹(Ω) is real for every variant.

use serde::{Deserialize, Serialize};

use crate::error::{self, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MassSign {
    Positive,
    Negative,
}

impl MassSign {
    pub fn value(self) -> f64 {
        match self {
            MassSign::Positive => 1.0,
            MassSign::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Susceptibility {
    /// χ⁻¹ = −Ω².
    FreeMass,
    /// χ⁻¹ = sign·(ω₀² − Ω²). A negative mass gives Ω² − ω₀², the
    /// convention for a spin oscillator in an inverted bias field.
    Oscillator { omega0_sq: f64, mass_sign: MassSign },
    /// Base response stiffened by a (possibly negative) spring `κ`.
    Shifted {
        base: Box<Susceptibility>,
        spring: f64,
    },
}

impl Susceptibility {
    pub fn oscillator(omega0_sq: f64, mass_sign: MassSign) -> Result<Self> {
        error::non_negative("omega0_sq", omega0_sq)?;
        Ok(Susceptibility::Oscillator {
            omega0_sq,
            mass_sign,
        })
    }

    /// Negative-mass oscillator at the Larmor frequency `omega_s`.
    pub fn spin(omega_s: f64) -> Result<Self> {
        error::non_negative("omega_s", omega_s)?;
        Ok(Susceptibility::Oscillator {
            omega0_sq: omega_s * omega_s,
            mass_sign: MassSign::Negative,
        })
    }

    pub fn shifted(self, spring: f64) -> Self {
        Susceptibility::Shifted {
            base: Box::new(self),
            spring,
        }
    }

    pub fn inverse_at(&self, omega: f64) -> f64 {
        match self {
            Susceptibility::FreeMass => -omega * omega,
            Susceptibility::Oscillator {
                omega0_sq,
                mass_sign,
            } => mass_sign.value() * (omega0_sq - omega * omega),
            Susceptibility::Shifted { base, spring } => base.inverse_at(omega) + spring,
        }
    }

    /// Coefficients `(a, b)` with χ⁻¹(Ω) = a + b·Ω².
    pub fn inverse_coeffs(&self) -> (f64, f64) {
        match self {
            Susceptibility::FreeMass => (0.0, -1.0),
            Susceptibility::Oscillator {
                omega0_sq,
                mass_sign,
            } => {
                let s = mass_sign.value();
                (s * omega0_sq, -s)
            }
            Susceptibility::Shifted { base, spring } => {
                let (a, b) = base.inverse_coeffs();
                (a + spring, b)
            }
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Susceptibility::FreeMass => Ok(()),
            Susceptibility::Oscillator { omega0_sq, .. } => {
                error::non_negative("omega0_sq", *omega0_sq).map(|_| ())
            }
            Susceptibility::Shifted { base, spring } => {
                error::finite("spring", *spring)?;
                base.validate()
            }
        }
    }
}

pub fn susceptibility_inverse(chi: &Susceptibility, omega: f64) -> f64 {
    chi.inverse_at(omega)
}
