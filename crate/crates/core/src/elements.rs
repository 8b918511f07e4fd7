//! Optical-chain blocks, input-field sources and physical coupling rates.

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::quadrature::SPEED_OF_LIGHT;

/// One block of an optical chain, applied in order to the probe beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element {
    /// Optomechanical interaction with the chain's mechanical mode at rate Υ.
    OmCoupling { upsilon: f64 },
    /// Shifts the classical carrier phase only; quantum quadratures pass unchanged.
    CarrierPhaseShift { delta: f64 },
    /// Rotates the quantum quadratures only; the carrier is untouched.
    QuantumPhaseShift { delta: f64 },
    /// Beamsplitter of power transmissivity η admitting fresh vacuum.
    Loss { eta: f64 },
}

impl Element {
    pub fn coupling(upsilon: f64) -> Result<Self> {
        let e = Element::OmCoupling { upsilon };
        e.validate()?;
        Ok(e)
    }

    pub fn loss(eta: f64) -> Result<Self> {
        let e = Element::Loss { eta };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Element::OmCoupling { upsilon } => error::non_negative("upsilon", upsilon).map(|_| ()),
            Element::CarrierPhaseShift { delta } | Element::QuantumPhaseShift { delta } => {
                error::finite("delta", delta).map(|_| ())
            }
            Element::Loss { eta } => error::efficiency("eta", eta).map(|_| ()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// The channel whose mechanical mode receives the signal force.
    Signal,
    Auxiliary,
}

impl Channel {
    pub fn partner(self) -> Self {
        match self {
            Channel::Signal => Channel::Auxiliary,
            Channel::Auxiliary => Channel::Signal,
        }
    }
}

/// State of the quantum field entering a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    /// Ground state: both quadratures have double-sided density ½.
    #[default]
    Vacuum,
    /// One arm of a two-mode squeezed pair. Each arm alone has density
    /// cosh2r/2; the pair correlates as +sinh2r/2 (cosine) and −sinh2r/2 (sine).
    TwoModeSqueezed { r: f64, partner: Channel },
}

impl SourceSpec {
    /// Auto spectral density of either input quadrature.
    pub fn variance(&self) -> f64 {
        match *self {
            SourceSpec::Vacuum => 0.5,
            SourceSpec::TwoModeSqueezed { r, .. } => 0.5 * (2.0 * r).cosh(),
        }
    }

    /// Cross spectral densities `(S^c, S^s)` between this arm and its partner.
    pub fn cross_density(&self) -> (f64, f64) {
        match *self {
            SourceSpec::Vacuum => (0.0, 0.0),
            SourceSpec::TwoModeSqueezed { r, .. } => {
                let sh = 0.5 * (2.0 * r).sinh();
                (sh, -sh)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SourceSpec::Vacuum => Ok(()),
            SourceSpec::TwoModeSqueezed { r, .. } => error::non_negative("r", r).map(|_| ()),
        }
    }
}

/// Coupling rate of a bad-cavity Fabry–Pérot with a movable end mirror:
/// `Υ = √(8ω_o I₀/m) / (γL)`.
pub fn coupling_cavity(
    half_bandwidth: f64,
    length: f64,
    carrier_frequency: f64,
    power: f64,
    mass: f64,
) -> Result<f64> {
    error::positive("half_bandwidth", half_bandwidth)?;
    error::positive("length", length)?;
    error::positive("power", power)?;
    Ok(
        coupling_free_mirror(carrier_frequency, power, mass)? * SPEED_OF_LIGHT
            / (half_bandwidth * length),
    )
}

/// Coupling rate of a single cavity-less movable mirror: `Υ = √(8ω_o I₀/m) / c`.
///
/// Zero power is allowed and gives zero coupling.
pub fn coupling_free_mirror(carrier_frequency: f64, power: f64, mass: f64) -> Result<f64> {
    error::positive("carrier_frequency", carrier_frequency)?;
    error::non_negative("power", power)?;
    error::positive("mass", mass)?;
    Ok((8.0 * carrier_frequency * power / mass).sqrt() / SPEED_OF_LIGHT)
}

/// Spin-ensemble coupling `Υ = c₀·√(Γ_S Ω_S)`. Only the scaling is known
/// in closed form, so the prefactor `c0` must come from the caller.
pub fn coupling_spin(gamma_s: f64, omega_s: f64, c0: f64) -> Result<f64> {
    error::positive("gamma_s", gamma_s)?;
    error::positive("omega_s", omega_s)?;
    error::positive("c0", c0)?;
    Ok(c0 * (gamma_s * omega_s).sqrt())
}

/// Loss factor `ε = √((1−η)/η)` of an output beamsplitter.
pub fn epsilon(eta: f64) -> Result<f64> {
    error::efficiency("eta", eta)?;
    Ok(((1.0 - eta) / eta).sqrt())
}

/// Inverse of [`epsilon`]: `η = 1/(1+ε²)`.
pub fn efficiency_from_epsilon(eps: f64) -> Result<f64> {
    error::non_negative("epsilon", eps)?;
    let eta = 1.0 / (1.0 + eps * eps);
    if eta > 0.0 {
        Ok(eta)
    } else {
        Err(Error::InvalidParameter {
            name: "epsilon",
            value: eps,
            reason: "too large to represent a positive efficiency",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const OMEGA_O: f64 = 1.77e15;

    #[test]
    fn cavity_coupling_scaling() {
        let base = coupling_cavity(2.0 * PI * 500.0, 4000.0, OMEGA_O, 1e4, 40.0).unwrap();
        let doubled_power = coupling_cavity(2.0 * PI * 500.0, 4000.0, OMEGA_O, 2e4, 40.0).unwrap();
        let doubled_gamma = coupling_cavity(2.0 * PI * 1000.0, 4000.0, OMEGA_O, 1e4, 40.0).unwrap();
        assert_relative_eq!(doubled_power / base, 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(doubled_gamma / base, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn cavity_coupling_hand_value() {
        // 8·1.77e15·1e4/40 = 3.54e18, √ = 1.88149e9, γL = 2π·500·4000 = 1.25664e7
        let v = coupling_cavity(2.0 * PI * 500.0, 4000.0, OMEGA_O, 1e4, 40.0).unwrap();
        assert_relative_eq!(v, 149.724_119_235_570_19, max_relative = 1e-12);
    }

    #[test]
    fn free_mirror_coupling() {
        let v = coupling_free_mirror(OMEGA_O, 1.0, 1e-3).unwrap();
        // √(8·1.77e15/1e-3)/c = 3.7630e9/2.99792458e8
        assert_relative_eq!(v, 12.551_941_998_638_79, max_relative = 1e-12);
        assert_eq!(coupling_free_mirror(OMEGA_O, 0.0, 1.0).unwrap(), 0.0);

        let (gamma, length) = (300.0, 10.0);
        let ratio = coupling_cavity(gamma, length, OMEGA_O, 5.0, 2.0).unwrap()
            / coupling_free_mirror(OMEGA_O, 5.0, 2.0).unwrap();
        assert_relative_eq!(
            ratio,
            SPEED_OF_LIGHT / (gamma * length),
            max_relative = 1e-14
        );
    }

    #[test]
    fn coupling_rejects_non_positive() {
        assert!(coupling_cavity(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(coupling_cavity(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(coupling_free_mirror(1.0, 1.0, 0.0).is_err());
        assert!(coupling_spin(0.0, 1.0, 1.0).is_err());
        assert!(coupling_spin(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn spin_coupling() {
        assert_eq!(coupling_spin(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(coupling_spin(4.0, 9.0, 0.5).unwrap(), 3.0);
        let r = coupling_spin(2.0, 12.0, 1.3).unwrap() / coupling_spin(2.0, 3.0, 1.3).unwrap();
        assert_relative_eq!(r, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(1.0).unwrap(), 0.0);
        assert_eq!(epsilon(0.5).unwrap(), 1.0);
        assert_relative_eq!(epsilon(0.8).unwrap(), 0.5, max_relative = 1e-15);
        assert!(epsilon(0.0).is_err());
        assert!(epsilon(1.0 + 1e-12).is_err());
        assert!(epsilon(-0.3).is_err());
    }

    #[test]
    fn epsilon_strictly_decreasing() {
        let etas: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        let eps: Vec<f64> = etas.iter().map(|&e| epsilon(e).unwrap()).collect();
        assert!(eps.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn epsilon_round_trip() {
        for eta in [0.3, 0.5, 0.9, 1.0] {
            let eps = epsilon(eta).unwrap();
            assert_relative_eq!(
                efficiency_from_epsilon(eps).unwrap(),
                eta,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn element_validation() {
        assert!(Element::coupling(-1.0).is_err());
        assert!(Element::loss(0.0).is_err());
        assert!(Element::loss(1.5).is_err());
        assert!(Element::loss(1.0).is_ok());
        assert!(SourceSpec::TwoModeSqueezed {
            r: -0.1,
            partner: Channel::Signal
        }
        .validate()
        .is_err());
    }

    #[test]
    fn source_densities() {
        assert_eq!(SourceSpec::Vacuum.variance(), 0.5);
        let tms = SourceSpec::TwoModeSqueezed {
            r: 0.0,
            partner: Channel::Auxiliary,
        };
        assert_eq!(tms.variance(), 0.5);
        assert_eq!(tms.cross_density(), (0.0, -0.0));
        let tms = SourceSpec::TwoModeSqueezed {
            r: 1.0,
            partner: Channel::Auxiliary,
        };
        let (c, s) = tms.cross_density();
        assert_relative_eq!(c, 0.5 * 2f64.sinh(), max_relative = 1e-15);
        assert_eq!(c, -s);
    }
}
