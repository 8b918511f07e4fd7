//! Closed-form spectral densities.
//!
//! Everything is force-normalized and two-sided (vacuum quadrature density
//! ½), so densities carry (rad/s)². Each function here has a matching
//! configuration of the [`crate::network`] solver that reproduces it.

mod hybrid;

pub use hybrid::{
    hybrid_approx_spectrum, hybrid_approx_terms, hybrid_component_spectra, hybrid_full_spectrum,
    hybrid_lowfreq_spectrum, hybrid_lowfreq_terms, matching_condition, HybridComponents,
    HybridParams, HybridTerms, MatchOutcome, RigidityMode,
};

use serde::Serialize;

use crate::density::Density;
use crate::elements::epsilon;
use crate::error::{self, Result};
use crate::network::DEGENERACY_RTOL;
use crate::susceptibility::Susceptibility;

/// Split of a single-channel sum-noise density by origin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SpectrumTerms {
    /// Measurement imprecision (phase quadrature of the probe).
    pub shot: f64,
    /// Radiation-pressure back action (amplitude quadrature).
    pub backaction: f64,
    /// Vacuum admitted by the output loss.
    pub loss: f64,
}

impl SpectrumTerms {
    pub fn total(&self) -> f64 {
        self.shot + self.backaction + self.loss
    }
}

/// Force-normalized standard quantum limit `|χ⁻¹(Ω)|`.
pub fn sql(chi: &Susceptibility, omega: f64) -> f64 {
    chi.inverse_at(omega).abs()
}

/// `½(|χ|⁻²/Υ² + Υ²)` of the lossless position meter.
pub fn position_meter_spectrum(upsilon: f64, chi: &Susceptibility, omega: f64) -> Result<f64> {
    error::positive("upsilon", upsilon)?;
    Ok(effective_terms(upsilon, 0.0, 0.0, chi.inverse_at(omega)).total())
}

/// `(Υ_κ, κ) = (2Υcosψ, Υ²sin2ψ)` of two passes with carrier phases φ ± ψ.
pub fn double_pass_effective(upsilon: f64, psi: f64) -> (f64, f64) {
    (
        2.0 * upsilon * psi.cos(),
        upsilon * upsilon * (2.0 * psi).sin(),
    )
}

/// `(Υ_ϰ, ϰ) = (Υcosφ, ½Υ²sin2φ)` of one pass read out in the sine quadrature.
pub fn virtual_rigidity_params(upsilon: f64, phi: f64) -> (f64, f64) {
    (
        upsilon * phi.cos(),
        0.5 * upsilon * upsilon * (2.0 * phi).sin(),
    )
}

/// Terms of `½{|χ⁻¹ + k|²/Υ² + Υ² + ε²|χ⁻¹ + k_loss|²/Υ²}` for an effective
/// coupling `Υ` and susceptibility inverse `chi_inv`.
fn effective_terms(upsilon: f64, rigidity: f64, eps: f64, chi_inv: f64) -> SpectrumTerms {
    let u2 = upsilon * upsilon;
    let shifted = chi_inv + rigidity;
    SpectrumTerms {
        shot: 0.5 * shifted * shifted / u2,
        backaction: 0.5 * u2,
        loss: 0.5 * eps * eps * chi_inv * chi_inv / u2,
    }
}

/// Virtual-rigidity readout with output loss, from the effective pair
/// `(Υ_ϰ, ϰ)`. The loss term sees the bare susceptibility.
pub fn lossy_virtual_terms_effective(
    upsilon_eff: f64,
    varkappa: f64,
    eta: f64,
    chi: &Susceptibility,
    omega: f64,
) -> Result<SpectrumTerms> {
    let eps = epsilon(eta)?;
    error::finite("varkappa", varkappa)?;
    error::positive("upsilon_eff", upsilon_eff.abs())?;
    Ok(effective_terms(
        upsilon_eff,
        varkappa,
        eps,
        chi.inverse_at(omega),
    ))
}

pub fn lossy_virtual_terms(
    upsilon: f64,
    phi: f64,
    eta: f64,
    chi: &Susceptibility,
    omega: f64,
) -> Result<Option<SpectrumTerms>> {
    error::positive("upsilon", upsilon)?;
    error::finite("phi", phi)?;
    epsilon(eta)?;
    if phi.cos().abs() <= DEGENERACY_RTOL {
        return Ok(None);
    }
    let (upsilon_eff, varkappa) = virtual_rigidity_params(upsilon, phi);
    lossy_virtual_terms_effective(upsilon_eff, varkappa, eta, chi, omega).map(Some)
}

/// `½{|χ⁻¹+ϰ|²/Υ_ϰ² + Υ_ϰ² + ε²|χ|⁻²/Υ_ϰ²}`. Degenerate when cosφ = 0.
pub fn lossy_virtual_spectrum(
    upsilon: f64,
    phi: f64,
    eta: f64,
    chi: &Susceptibility,
    omega: f64,
) -> Result<Density> {
    Ok(match lossy_virtual_terms(upsilon, phi, eta, chi, omega)? {
        Some(t) => Density::Finite(t.total()),
        None => Density::Degenerate,
    })
}

/// Terms of the physical-spring readout. Shot and loss noise both scale
/// with `|χ⁻¹+κ|²`, so both vanish on the shifted resonance.
pub fn lossy_real_terms(
    upsilon_k: f64,
    kappa: f64,
    eta: f64,
    chi: &Susceptibility,
    omega: f64,
) -> Result<SpectrumTerms> {
    error::positive("upsilon_kappa", upsilon_k)?;
    error::finite("kappa", kappa)?;
    let eps = epsilon(eta)?;
    // chain with the spring folded into χ: the loss term sees χ⁻¹ + κ too
    Ok(effective_terms(
        upsilon_k,
        0.0,
        eps,
        chi.inverse_at(omega) + kappa,
    ))
}

/// `½{(|χ⁻¹+κ|²/Υ_κ²)(1+ε²) + Υ_κ²}`.
pub fn lossy_real_spectrum(
    upsilon_k: f64,
    kappa: f64,
    eta: f64,
    chi: &Susceptibility,
    omega: f64,
) -> Result<f64> {
    lossy_real_terms(upsilon_k, kappa, eta, chi, omega).map(|t| t.total())
}

/// Lower bound over Υ_ϰ of the virtual-rigidity density:
/// `√(|χ⁻¹+ϰ|² + ε²|χ|⁻²)`, never below `ε·S_SQL`.
pub fn optimal_lossy_bound(
    chi: &Susceptibility,
    varkappa: f64,
    eta: f64,
    omega: f64,
) -> Result<f64> {
    let eps = epsilon(eta)?;
    error::finite("varkappa", varkappa)?;
    let chi_inv = chi.inverse_at(omega);
    Ok((chi_inv + varkappa).hypot(eps * chi_inv))
}
