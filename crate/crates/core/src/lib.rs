//! Quantum noise of linear optomechanical force sensors in the two-photon
//! quadrature picture, with cavity-free double-pass optical springs.
//!
//! - [`network`] solves arbitrary chains of optical blocks bound to a
//!   mechanical mode and is the reference for everything else.
//! - [`formulas`] holds the closed-form spectral densities.
//! - [`optimize`] minimizes them over couplings, phases and rigidities.
//!
//! Units: rates in rad/s; χ⁻¹, κ, ϰ and Υ² in (rad/s)²; two-sided quadrature
//! densities normalized to ½ for vacuum, so force densities carry (rad/s)².

pub mod density;
pub mod elements;
pub mod error;
pub mod formulas;
pub mod grid;
pub mod network;
pub mod optimize;
pub mod quadrature;
pub mod susceptibility;

pub use density::Density;
pub use elements::{
    coupling_cavity, coupling_free_mirror, coupling_spin, efficiency_from_epsilon, epsilon,
    Channel, Element, SourceSpec,
};
pub use error::{Error, Result};
pub use formulas::{HybridParams, RigidityMode};
pub use grid::{FrequencyGrid, Spacing};
pub use network::{Chain, HybridSystem, ReadoutDecomposition};
pub use quadrature::{classical_quadratures, rotate, Carrier, QuadratureVector, HBAR};
pub use susceptibility::{susceptibility_inverse, MassSign, Susceptibility};
