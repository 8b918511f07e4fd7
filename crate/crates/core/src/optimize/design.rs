use serde::Serialize;

use crate::elements::efficiency_from_epsilon;
use crate::error::{self, Result};
use crate::formulas::{HybridParams, RigidityMode};
use crate::network::{Chain, HybridSystem};
use crate::susceptibility::Susceptibility;

/// A matched two-channel design together with the auxiliary-channel
/// hardware that realizes it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridDesign {
    pub params: HybridParams,
    /// Per-pass coupling Υ_S of the auxiliary channel.
    pub upsilon_s: f64,
    /// Real mode: half the inter-pass phase, ψ_S. Virtual mode: carrier phase φ_S.
    pub phase_s: f64,
}

/// Auxiliary coupling and phase whose effective pair is `(Υ_I, k)`.
///
/// Real: `tanψ = 2k/Υ_I²`, `Υ_S = Υ_I/(2cosψ)`. Virtual: `tanφ = k/Υ_I²`,
/// `Υ_S = Υ_I/cosφ`.
pub fn realize_auxiliary(upsilon_i: f64, k: f64, mode: RigidityMode) -> Result<(f64, f64)> {
    error::positive("upsilon_i", upsilon_i)?;
    error::finite("k", k)?;
    let u2 = upsilon_i * upsilon_i;
    Ok(match mode {
        RigidityMode::Real => {
            let psi = (2.0 * k / u2).atan();
            (upsilon_i / (2.0 * psi.cos()), psi)
        }
        RigidityMode::Virtual => {
            let phi = (k / u2).atan();
            (upsilon_i / phi.cos(), phi)
        }
    })
}

/// Free-mass signal channel aligned with a negative-mass spin oscillator at
/// `omega_s` by the rigidity `k = Ω_S²`. Lossless and unsqueezed until
/// [`HybridDesign::with_squeezing`] / [`HybridDesign::with_losses`].
pub fn design_hybrid(omega_s: f64, upsilon_i: f64, mode: RigidityMode) -> Result<HybridDesign> {
    error::positive("omega_s", omega_s)?;
    let chi_s = Susceptibility::spin(omega_s)?;
    design_with_rigidity(
        upsilon_i,
        Susceptibility::FreeMass,
        chi_s,
        omega_s * omega_s,
        mode,
    )
}

/// As [`design_hybrid`] for arbitrary susceptibilities and rigidity.
pub fn design_with_rigidity(
    upsilon_i: f64,
    chi_i: Susceptibility,
    chi_s: Susceptibility,
    k: f64,
    mode: RigidityMode,
) -> Result<HybridDesign> {
    let (upsilon_s, phase_s) = realize_auxiliary(upsilon_i, k, mode)?;
    let params = HybridParams {
        upsilon_i,
        r: 0.0,
        eps_i: 0.0,
        eps_s: 0.0,
        chi_i,
        chi_s,
        k,
        mode,
    };
    params.validate()?;
    Ok(HybridDesign {
        params,
        upsilon_s,
        phase_s,
    })
}

impl HybridDesign {
    pub fn with_squeezing(mut self, r: f64) -> Result<Self> {
        self.params.r = error::non_negative("r", r)?;
        Ok(self)
    }

    pub fn with_losses(mut self, eps_i: f64, eps_s: f64) -> Result<Self> {
        self.params.eps_i = error::non_negative("eps_i", eps_i)?;
        self.params.eps_s = error::non_negative("eps_s", eps_s)?;
        Ok(self)
    }

    /// Network model of this design: single-pass signal channel, and a
    /// single-pass (virtual) or double-pass (real) auxiliary channel, each
    /// with a trailing output loss.
    pub fn system(&self) -> Result<HybridSystem> {
        let p = &self.params;
        let eta_i = efficiency_from_epsilon(p.eps_i)?;
        let eta_s = efficiency_from_epsilon(p.eps_s)?;
        let signal = Chain::single_pass(p.chi_i.clone(), p.upsilon_i, 0.0, eta_i)?;
        let auxiliary = match p.mode {
            RigidityMode::Virtual => {
                Chain::single_pass(p.chi_s.clone(), self.upsilon_s, self.phase_s, eta_s)?
            }
            RigidityMode::Real => {
                Chain::double_pass(p.chi_s.clone(), self.upsilon_s, 0.0, self.phase_s, eta_s)?
            }
        };
        HybridSystem::new(signal, auxiliary, p.r)
    }
}
