//! A resolved configuration as something that can be evaluated per Ω.

use optospring::formulas::{
    double_pass_effective, hybrid_component_spectra, hybrid_full_spectrum, lossy_real_terms,
    lossy_virtual_terms, sql, virtual_rigidity_params, HybridParams, RigidityMode,
};
use optospring::network::DEGENERACY_RTOL;
use optospring::optimize::{
    design_with_rigidity, golden_section, optimal_upsilon_pointwise, optimal_upsilon_real,
    HybridDesign,
};
use optospring::{epsilon, Chain, Density, FrequencyGrid, HybridSystem, Susceptibility};

use crate::config::{RunConfig, Scheme};
use crate::error::{at, Result};

/// One row of a noise budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetPoint {
    pub omega: f64,
    pub s_sum: Density,
    pub s_sql: f64,
    pub shot: f64,
    pub backaction: f64,
    pub loss_i: f64,
    pub loss_s: f64,
    /// The closed loop is on resonance or the readout carries no signal.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    PositionMeter {
        chi: Susceptibility,
        upsilon: f64,
        eta: f64,
    },
    VirtualRigidity {
        chi: Susceptibility,
        upsilon: f64,
        phi: f64,
        eta: f64,
    },
    RealRigidity {
        chi: Susceptibility,
        upsilon: f64,
        psi: f64,
        eta: f64,
    },
    Hybrid(HybridDesign),
}

fn on_resonance(chi_inv: f64, spring: f64) -> bool {
    (chi_inv + spring).abs() <= DEGENERACY_RTOL * (chi_inv.abs() + spring.abs())
}

impl Model {
    pub fn from_config(c: &RunConfig) -> Result<Self> {
        let chi = c.mechanics.build("mechanics")?;
        Ok(match c.scheme {
            Scheme::PositionMeter => {
                let p = c.position_meter.as_ref().expect("resolved");
                Model::PositionMeter {
                    chi,
                    upsilon: p.upsilon,
                    eta: p.eta,
                }
            }
            Scheme::VirtualRigidity => {
                let p = c.virtual_rigidity.as_ref().expect("resolved");
                Model::VirtualRigidity {
                    chi,
                    upsilon: p.upsilon,
                    phi: p.phi,
                    eta: p.eta,
                }
            }
            Scheme::RealRigidity => {
                let p = c.real_rigidity.as_ref().expect("resolved");
                Model::RealRigidity {
                    chi,
                    upsilon: p.upsilon,
                    psi: p.psi,
                    eta: p.eta,
                }
            }
            Scheme::Hybrid => {
                let h = c.hybrid.as_ref().expect("resolved");
                let k = c.hybrid_rigidity()?;
                let chi_s = h.auxiliary_mechanics()?;
                let design = design_with_rigidity(h.upsilon_i, chi, chi_s, k, h.mode)
                    .and_then(|d| d.with_squeezing(h.r))
                    .and_then(|d| d.with_losses(epsilon(h.eta_i)?, epsilon(h.eta_s)?))
                    .map_err(at("hybrid"))?;
                Model::Hybrid(design)
            }
        })
    }

    /// Signal-channel susceptibility.
    pub fn chi(&self) -> &Susceptibility {
        match self {
            Model::PositionMeter { chi, .. }
            | Model::VirtualRigidity { chi, .. }
            | Model::RealRigidity { chi, .. } => chi,
            Model::Hybrid(d) => &d.params.chi_i,
        }
    }

    /// Rigidity the scheme adds: ϰ, κ, or the auxiliary `k`.
    pub fn rigidity(&self) -> f64 {
        match *self {
            Model::PositionMeter { .. } => 0.0,
            Model::VirtualRigidity { upsilon, phi, .. } => virtual_rigidity_params(upsilon, phi).1,
            Model::RealRigidity { upsilon, psi, .. } => double_pass_effective(upsilon, psi).1,
            Model::Hybrid(ref d) => d.params.k,
        }
    }

    pub fn evaluate(&self, omega: f64) -> BudgetPoint {
        let s_sql = sql(self.chi(), omega);
        let chi_inv = self.chi().inverse_at(omega);
        let mut point = BudgetPoint {
            omega,
            s_sum: Density::Degenerate,
            s_sql,
            shot: f64::NAN,
            backaction: f64::NAN,
            loss_i: f64::NAN,
            loss_s: 0.0,
            degenerate: true,
        };
        let single = |terms: optospring::formulas::SpectrumTerms, mut point: BudgetPoint| {
            point.s_sum = Density::Finite(terms.total());
            point.shot = terms.shot;
            point.backaction = terms.backaction;
            point.loss_i = terms.loss;
            point
        };
        match *self {
            Model::PositionMeter {
                ref chi,
                upsilon,
                eta,
            } => {
                let terms = lossy_virtual_terms(upsilon, 0.0, eta, chi, omega)
                    .expect("validated")
                    .expect("cos 0 = 1");
                point = single(terms, point);
                point.degenerate = on_resonance(chi_inv, 0.0);
            }
            Model::VirtualRigidity {
                ref chi,
                upsilon,
                phi,
                eta,
            } => {
                if let Some(terms) =
                    lossy_virtual_terms(upsilon, phi, eta, chi, omega).expect("validated")
                {
                    point = single(terms, point);
                    point.degenerate = on_resonance(chi_inv, 0.0);
                }
            }
            Model::RealRigidity {
                ref chi,
                upsilon,
                psi,
                eta,
            } => {
                let (upsilon_k, kappa) = double_pass_effective(upsilon, psi);
                if upsilon_k.abs() > DEGENERACY_RTOL * upsilon {
                    let terms = lossy_real_terms(upsilon_k.abs(), kappa, eta, chi, omega)
                        .expect("validated");
                    point = single(terms, point);
                    point.degenerate = on_resonance(chi_inv, kappa);
                }
            }
            Model::Hybrid(ref d) => {
                let p = &d.params;
                let full = hybrid_full_spectrum(p, omega).expect("validated");
                let aux_inv = p.chi_s.inverse_at(omega);
                // the small-loss decomposition of the matched form
                let u2 = p.upsilon_i * p.upsilon_i;
                let c = hybrid_component_spectra(p, omega).expect("validated");
                let ch = (2.0 * p.r).cosh();
                point.s_sum = full;
                point.shot = 0.5 * chi_inv * chi_inv / u2 / ch;
                point.backaction = 0.5 * u2 / ch;
                point.loss_i = c.s_i_loss;
                point.loss_s = c.s_s_loss;
                point.degenerate = full.is_degenerate()
                    || on_resonance(chi_inv, 0.0)
                    || on_resonance(aux_inv, p.k_loss());
                if p.mode == RigidityMode::Virtual && d.phase_s.cos().abs() <= DEGENERACY_RTOL {
                    point.degenerate = true;
                }
            }
        }
        point
    }

    pub fn budget(&self, grid: &FrequencyGrid) -> Vec<BudgetPoint> {
        use rayon::prelude::*;
        grid.points()
            .par_iter()
            .map(|&w| self.evaluate(w))
            .collect()
    }

    /// The network model equivalent to this configuration.
    pub fn oracle(&self) -> Result<Oracle> {
        Ok(match *self {
            Model::PositionMeter {
                ref chi,
                upsilon,
                eta,
            } => Oracle::Chain(
                Chain::single_pass(chi.clone(), upsilon, 0.0, eta).map_err(at("position_meter"))?,
            ),
            Model::VirtualRigidity {
                ref chi,
                upsilon,
                phi,
                eta,
            } => Oracle::Chain(
                Chain::single_pass(chi.clone(), upsilon, phi, eta)
                    .map_err(at("virtual_rigidity"))?,
            ),
            Model::RealRigidity {
                ref chi,
                upsilon,
                psi,
                eta,
            } => Oracle::Chain(
                Chain::double_pass(chi.clone(), upsilon, 0.0, psi, eta)
                    .map_err(at("real_rigidity"))?,
            ),
            Model::Hybrid(ref d) => Oracle::Hybrid(Box::new(d.system().map_err(at("hybrid"))?)),
        })
    }

    /// S_sum minimized over the scheme's coupling at this Ω alone.
    pub fn pointwise_optimum(&self, omega: f64) -> Density {
        let found = match *self {
            Model::PositionMeter { ref chi, eta, .. } => {
                optimal_upsilon_pointwise(chi, 0.0, eta, omega)
            }
            Model::VirtualRigidity {
                ref chi,
                upsilon,
                phi,
                eta,
            } => {
                optimal_upsilon_pointwise(chi, virtual_rigidity_params(upsilon, phi).1, eta, omega)
            }
            Model::RealRigidity {
                ref chi,
                upsilon,
                psi,
                eta,
            } => optimal_upsilon_real(chi, double_pass_effective(upsilon, psi).1, eta, omega),
            Model::Hybrid(ref d) => return hybrid_pointwise_optimum(&d.params, omega),
        };
        found.map_or(Density::Degenerate, |o| Density::Finite(o.s_min))
    }
}

/// Golden section over ln Υ_I² around the small-loss optimum.
fn hybrid_pointwise_optimum(p: &HybridParams, omega: f64) -> Density {
    let ch = (2.0 * p.r).cosh();
    let a2 = p.chi_i.inverse_at(omega).powi(2);
    let b2 = (p.chi_s.inverse_at(omega) + p.k_loss()).powi(2);
    let guess = (a2 + ch * (p.eps_i * p.eps_i * a2 + p.eps_s * p.eps_s * b2)).sqrt();
    let center = if guess > 0.0 { guess.ln() } else { 0.0 };
    let eval = |t: f64| {
        let q = HybridParams {
            upsilon_i: (0.5 * t).exp(),
            ..p.clone()
        };
        hybrid_full_spectrum(&q, omega).map_or(f64::INFINITY, |d| d.value())
    };
    let m = golden_section(eval, center - 30.0, center + 30.0, 1e-9);
    if m.value.is_finite() {
        Density::Finite(m.value)
    } else {
        Density::Degenerate
    }
}

pub enum Oracle {
    Chain(Chain),
    Hybrid(Box<HybridSystem>),
}

impl Oracle {
    pub fn spectra(&self, grid: &FrequencyGrid) -> Vec<Density> {
        match self {
            Oracle::Chain(c) => c.sum_noise_spectra(grid),
            Oracle::Hybrid(h) => h.sum_noise_spectra(grid),
        }
    }

    pub fn spectrum(&self, omega: f64) -> Density {
        match self {
            Oracle::Chain(c) => c.sum_noise_spectrum(omega),
            Oracle::Hybrid(h) => h.sum_noise_spectrum(omega),
        }
    }
}
