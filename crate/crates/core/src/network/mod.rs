//! Brute-force linear network solver.
//!
//! A [`Chain`] is propagated element by element on the two-photon
//! quadratures. Every optomechanical coupling writes the mechanical
//! coordinate into the phase quadrature of the local carrier frame and
//! feeds the local amplitude quadrature back as radiation pressure. The
//! loop `χ⁻¹X = f + F` is then closed algebraically at each frequency,
//! so the emergent spring comes out of the solve rather than being put in.

mod chain;
mod hybrid;

pub use chain::{
    extract_spring, solve_chain, sum_noise_spectrum, Chain, NoiseSource, NoiseTerm, OpenLoop,
    Quadrature, ReadoutDecomposition, DEGENERACY_RTOL,
};
pub use hybrid::{
    combine_optimal, cross_spectrum, try_combine_optimal, CrossSpectra, HybridSystem,
};
