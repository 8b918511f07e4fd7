//! Fixtures shared by the criterion benches.

use optospring::formulas::RigidityMode;
use optospring::optimize::design_hybrid;
use optospring::{Chain, FrequencyGrid, HybridSystem, Susceptibility};

pub fn grid(points: usize) -> FrequencyGrid {
    FrequencyGrid::log(0.1, 10.0, points).expect("valid grid")
}

pub fn double_pass_chain() -> Chain {
    Chain::double_pass(Susceptibility::FreeMass, 1.3, 0.2, 0.4, 0.9).expect("valid chain")
}

pub fn matched_hybrid() -> HybridSystem {
    design_hybrid(3.0, 1.0, RigidityMode::Real)
        .and_then(|d| d.with_squeezing(1.0))
        .and_then(|d| d.with_losses(0.1, 0.1))
        .and_then(|d| d.system())
        .expect("valid design")
}
