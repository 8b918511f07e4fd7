//! Two-channel scheme: a signal channel plus an auxiliary channel whose
//! rigidity-shifted response mirrors the signal one, read out with a
//! two-mode squeezed probe and combined optimally.

use serde::{Deserialize, Serialize};

use crate::density::Density;
use crate::error::{self, Result};
use crate::grid::FrequencyGrid;
use crate::susceptibility::Susceptibility;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RigidityMode {
    /// Rigidity from a rotated readout quadrature; losses see the bare χ_S.
    Virtual,
    /// Physical double-pass spring; losses see the shifted χ_S.
    Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridParams {
    /// Common effective coupling Υ_I of both channels.
    pub upsilon_i: f64,
    /// Two-mode squeeze parameter.
    pub r: f64,
    pub eps_i: f64,
    pub eps_s: f64,
    pub chi_i: Susceptibility,
    pub chi_s: Susceptibility,
    /// Rigidity applied to the auxiliary channel.
    pub k: f64,
    pub mode: RigidityMode,
}

impl HybridParams {
    /// Rigidity seen by the auxiliary loss term.
    pub fn k_loss(&self) -> f64 {
        match self.mode {
            RigidityMode::Virtual => 0.0,
            RigidityMode::Real => self.k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        error::positive("upsilon_i", self.upsilon_i)?;
        error::non_negative("r", self.r)?;
        error::non_negative("eps_i", self.eps_i)?;
        error::non_negative("eps_s", self.eps_s)?;
        error::finite("k", self.k)?;
        self.chi_i.validate()?;
        self.chi_s.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridComponents {
    pub s_i0: f64,
    pub s_s0: f64,
    pub s_si0: f64,
    pub s_i_loss: f64,
    pub s_s_loss: f64,
}

impl HybridComponents {
    /// `S_I0·S_S0 − S_SI0²`, zero for matched channels.
    pub fn determinant(&self) -> f64 {
        self.s_i0 * self.s_s0 - self.s_si0 * self.s_si0
    }
}

/// Noise components of both channels before entanglement weighting.
///
/// The signed cross term is `S_SI0 = ½(Υ² − χ_I⁻¹(χ_S⁻¹+k)/Υ²)`, which is
/// what the channel noise operators give with correlations
/// `(+sinh2r/2, −sinh2r/2)`; with it `S_I0·S_S0 − S_SI0² = ¼(χ_I⁻¹+χ_S⁻¹+k)²`.
pub fn hybrid_component_spectra(p: &HybridParams, omega: f64) -> Result<HybridComponents> {
    p.validate()?;
    let u2 = p.upsilon_i * p.upsilon_i;
    let a = p.chi_i.inverse_at(omega);
    let chi_s_inv = p.chi_s.inverse_at(omega);
    let b = chi_s_inv + p.k;
    let b_loss = chi_s_inv + p.k_loss();
    Ok(HybridComponents {
        s_i0: 0.5 * (a * a / u2 + u2),
        s_s0: 0.5 * (b * b / u2 + u2),
        s_si0: 0.5 * (u2 - a * b / u2),
        s_i_loss: 0.5 * p.eps_i * p.eps_i * a * a / u2,
        s_s_loss: 0.5 * p.eps_s * p.eps_s * b_loss * b_loss / u2,
    })
}

/// Optimally combined two-channel density `S_I − S_IS²/S_S` with
/// `S_I = S_I0 cosh2r + S_I,loss`, `S_S = S_S0 cosh2r + S_S,loss`,
/// `S_IS = S_SI0 sinh2r`, in expanded form. Valid for unmatched `k` too.
pub fn hybrid_full_spectrum(p: &HybridParams, omega: f64) -> Result<Density> {
    let c = hybrid_component_spectra(p, omega)?;
    let (ch, sh) = ((2.0 * p.r).cosh(), (2.0 * p.r).sinh());
    let numerator = c.determinant() * sh * sh
        + c.s_s0 * c.s_i0
        + (c.s_s0 * c.s_i_loss + c.s_i0 * c.s_s_loss) * ch
        + c.s_i_loss * c.s_s_loss;
    let denominator = c.s_s0 * ch + c.s_s_loss;
    Ok(if denominator > 0.0 {
        Density::Finite(numerator / denominator)
    } else {
        Density::Degenerate
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridTerms {
    /// Quantum noise reduced by the entanglement, `S_I0/cosh2r`.
    pub entangled: f64,
    pub loss_i: f64,
    pub loss_s: f64,
}

impl HybridTerms {
    pub fn total(&self) -> f64 {
        self.entangled + self.loss_i + self.loss_s
    }
}

/// Matched, small-loss form: the full density without the loss×loss term
/// in the numerator and the auxiliary loss in the denominator.
pub fn hybrid_approx_terms(p: &HybridParams, omega: f64) -> Result<HybridTerms> {
    p.validate()?;
    let u2 = p.upsilon_i * p.upsilon_i;
    let a2 = p.chi_i.inverse_at(omega).powi(2);
    let s_inv2 = p.chi_s.inverse_at(omega).powi(2);
    let aux = match p.mode {
        RigidityMode::Virtual => s_inv2,
        RigidityMode::Real => a2,
    };
    Ok(HybridTerms {
        entangled: (a2 / u2 + u2) / (2.0 * (2.0 * p.r).cosh()),
        loss_i: p.eps_i * p.eps_i * a2 / (2.0 * u2),
        loss_s: p.eps_s * p.eps_s * aux / (2.0 * u2),
    })
}

pub fn hybrid_approx_spectrum(p: &HybridParams, omega: f64) -> Result<f64> {
    hybrid_approx_terms(p, omega).map(|t| t.total())
}

/// Approximate terms for a free-mass signal channel and a negative-mass spin
/// oscillator at `omega_s`, aligned by a rigidity Ω_S², far below Ω_S.
pub fn hybrid_lowfreq_terms(
    upsilon_i: f64,
    r: f64,
    eps_i: f64,
    eps_s: f64,
    omega_s: f64,
    mode: RigidityMode,
    omega: f64,
) -> HybridTerms {
    if omega >= omega_s / 3.0 {
        log::warn!("low-frequency form evaluated at Ω = {omega}, not well below Ω_S = {omega_s}");
    }
    let u2 = upsilon_i * upsilon_i;
    let w4 = omega.powi(4);
    let aux = match mode {
        RigidityMode::Virtual => omega_s.powi(4),
        RigidityMode::Real => w4,
    };
    HybridTerms {
        entangled: (w4 / u2 + u2) / (2.0 * (2.0 * r).cosh()),
        loss_i: eps_i * eps_i * w4 / (2.0 * u2),
        loss_s: eps_s * eps_s * aux / (2.0 * u2),
    }
}

pub fn hybrid_lowfreq_spectrum(
    upsilon_i: f64,
    r: f64,
    eps_i: f64,
    eps_s: f64,
    omega_s: f64,
    mode: RigidityMode,
    omega: f64,
) -> f64 {
    hybrid_lowfreq_terms(upsilon_i, r, eps_i, eps_s, omega_s, mode, omega).total()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MatchOutcome {
    /// A single rigidity aligns the channels at every frequency.
    Scalar(f64),
    /// No frequency-independent rigidity exists; the required `k(Ω)` per band point.
    Profile(Vec<(f64, f64)>),
}

impl MatchOutcome {
    pub fn scalar(&self) -> Option<f64> {
        match self {
            MatchOutcome::Scalar(k) => Some(*k),
            MatchOutcome::Profile(_) => None,
        }
    }
}

/// Rigidity `k` with `χ_S⁻¹(Ω) + k = −χ_I⁻¹(Ω)`.
///
/// Both inverses are quadratic in Ω, so a frequency-independent `k` exists
/// exactly when their Ω² coefficients cancel.
pub fn matching_condition(
    chi_i: &Susceptibility,
    chi_s: &Susceptibility,
    band: &FrequencyGrid,
) -> MatchOutcome {
    let (a_i, b_i) = chi_i.inverse_coeffs();
    let (a_s, b_s) = chi_s.inverse_coeffs();
    if (b_i + b_s).abs() <= 1e-12 * (b_i.abs() + b_s.abs()) {
        MatchOutcome::Scalar(-(a_i + a_s))
    } else {
        MatchOutcome::Profile(
            band.iter()
                .map(|w| (w, -chi_i.inverse_at(w) - chi_s.inverse_at(w)))
                .collect(),
        )
    }
}
