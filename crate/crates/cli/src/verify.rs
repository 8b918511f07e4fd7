//! Closed forms against the network oracle on seeded random configurations.

use optospring::formulas::{
    double_pass_effective, hybrid_full_spectrum, lossy_real_spectrum, lossy_virtual_spectrum,
    matching_condition, position_meter_spectrum, RigidityMode,
};
use optospring::optimize::{design_with_rigidity, HybridDesign};
use optospring::{epsilon, Chain, Density, FrequencyGrid, MassSign, Susceptibility};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::{num, Report, Table};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const GRID_POINTS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    PositionMeter,
    VirtualRigidity,
    RealRigidity,
    Hybrid,
}

impl Formula {
    pub const ALL: [Formula; 4] = [
        Formula::PositionMeter,
        Formula::VirtualRigidity,
        Formula::RealRigidity,
        Formula::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formula::PositionMeter => "position_meter",
            Formula::VirtualRigidity => "virtual_rigidity",
            Formula::RealRigidity => "real_rigidity",
            Formula::Hybrid => "hybrid_full",
        }
    }
}

/// One random configuration, shared by all four comparisons.
#[derive(Debug, Clone)]
pub struct Sample {
    pub grid: FrequencyGrid,
    pub chi: Susceptibility,
    pub upsilon: f64,
    pub phi: f64,
    pub psi: f64,
    pub eta: f64,
    pub hybrid: HybridDesign,
}

fn draw_mechanics(rng: &mut ChaCha8Rng, allow_negative: bool) -> Susceptibility {
    let kinds = if allow_negative { 3 } else { 2 };
    match rng.gen_range(0..kinds) {
        0 => Susceptibility::FreeMass,
        1 => Susceptibility::oscillator(rng.gen_range(0.1f64..3.0).powi(2), MassSign::Positive)
            .expect("positive"),
        _ => Susceptibility::oscillator(rng.gen_range(0.1f64..3.0).powi(2), MassSign::Negative)
            .expect("positive"),
    }
}

/// Υ ∈ [0.1, 10], φ, ψ ∈ (−1.4, 1.4), η ∈ [0.5, 1], r ∈ [0, 2] and a
/// 30-point log grid spanning two decades.
pub fn draw_sample(rng: &mut ChaCha8Rng) -> Sample {
    let lo = rng.gen_range(0.05..0.5);
    let grid = FrequencyGrid::log(lo, 100.0 * lo, GRID_POINTS).expect("valid grid");
    let chi = draw_mechanics(rng, true);
    let upsilon = rng.gen_range(0.1..=10.0);
    let phi = rng.gen_range(-1.4..1.4);
    let psi = rng.gen_range(-1.4..1.4);
    let eta = rng.gen_range(0.5..=1.0);

    let upsilon_i = rng.gen_range(0.1..=10.0);
    let r = rng.gen_range(0.0..=2.0);
    let eta_i = rng.gen_range(0.5..=1.0);
    let eta_s = rng.gen_range(0.5..=1.0);
    let mode = if rng.gen_bool(0.5) {
        RigidityMode::Virtual
    } else {
        RigidityMode::Real
    };
    let chi_s = Susceptibility::spin(rng.gen_range(0.1..3.0)).expect("positive");
    let chi_i = draw_mechanics(rng, false);
    let matched = rng.gen_bool(0.5);
    let free_k = rng.gen_range(-20.0..20.0);
    let k = match matching_condition(&chi_i, &chi_s, &grid).scalar() {
        Some(k) if matched => k,
        _ => free_k,
    };
    let hybrid = design_with_rigidity(upsilon_i, chi_i, chi_s, k, mode)
        .and_then(|d| d.with_squeezing(r))
        .and_then(|d| d.with_losses(epsilon(eta_i)?, epsilon(eta_s)?))
        .expect("drawn inside the valid region");
    Sample {
        grid,
        chi,
        upsilon,
        phi,
        psi,
        eta,
        hybrid,
    }
}

pub fn draw_samples(seed: u64, samples: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| draw_sample(&mut rng)).collect()
}

/// `|a − b| / max(|a|, |b|)`; a point degenerate on one side only counts as ∞.
pub fn relative_error(formula: Density, oracle: Density) -> f64 {
    match (formula, oracle) {
        (Density::Finite(a), Density::Finite(b)) => {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            }
        }
        (Density::Degenerate, Density::Degenerate) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Closed form and oracle for one formula over the sample's grid.
pub fn compare(sample: &Sample, formula: Formula) -> Vec<(f64, Density, Density)> {
    let grid = &sample.grid;
    let (closed, oracle): (Vec<Density>, Vec<Density>) = match formula {
        Formula::PositionMeter => {
            let chain =
                Chain::single_pass(sample.chi.clone(), sample.upsilon, 0.0, 1.0).expect("valid");
            (
                grid.iter()
                    .map(|w| {
                        Density::Finite(
                            position_meter_spectrum(sample.upsilon, &sample.chi, w).expect("valid"),
                        )
                    })
                    .collect(),
                chain.sum_noise_spectra(grid),
            )
        }
        Formula::VirtualRigidity => {
            let chain =
                Chain::single_pass(sample.chi.clone(), sample.upsilon, sample.phi, sample.eta)
                    .expect("valid");
            (
                grid.iter()
                    .map(|w| {
                        lossy_virtual_spectrum(
                            sample.upsilon,
                            sample.phi,
                            sample.eta,
                            &sample.chi,
                            w,
                        )
                        .expect("valid")
                    })
                    .collect(),
                chain.sum_noise_spectra(grid),
            )
        }
        Formula::RealRigidity => {
            let chain = Chain::double_pass(
                sample.chi.clone(),
                sample.upsilon,
                0.0,
                sample.psi,
                sample.eta,
            )
            .expect("valid");
            let (upsilon_k, kappa) = double_pass_effective(sample.upsilon, sample.psi);
            (
                grid.iter()
                    .map(|w| {
                        Density::Finite(
                            lossy_real_spectrum(upsilon_k.abs(), kappa, sample.eta, &sample.chi, w)
                                .expect("valid"),
                        )
                    })
                    .collect(),
                chain.sum_noise_spectra(grid),
            )
        }
        Formula::Hybrid => {
            let system = sample.hybrid.system().expect("valid");
            (
                grid.iter()
                    .map(|w| hybrid_full_spectrum(&sample.hybrid.params, w).expect("valid"))
                    .collect(),
                system.sum_noise_spectra(grid),
            )
        }
    };
    grid.iter()
        .zip(closed.into_iter().zip(oracle))
        .map(|(w, (c, o))| (w, c, o))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaResult {
    pub formula: Formula,
    pub max_rel_error: f64,
    pub worst_sample: usize,
    pub worst_omega: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub results: Vec<FormulaResult>,
    pub tol: f64,
    pub report: Report,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.max_rel_error <= self.tol)
    }
}

pub fn run_verify(seed: u64, samples: usize, tol: f64) -> VerifyOutcome {
    let drawn = draw_samples(seed, samples);
    // per sample: the worst point of every formula
    let per_sample: Vec<Vec<(f64, f64, usize)>> = drawn
        .par_iter()
        .map(|s| {
            Formula::ALL
                .iter()
                .map(|&f| {
                    let rows = compare(s, f);
                    let mut worst = (0.0, f64::NAN, rows.len());
                    for (w, c, o) in rows {
                        let e = relative_error(c, o);
                        if e > worst.0 || worst.1.is_nan() {
                            worst = (e, w, worst.2);
                        }
                    }
                    worst
                })
                .collect()
        })
        .collect();

    let results: Vec<FormulaResult> = Formula::ALL
        .iter()
        .enumerate()
        .map(|(j, &formula)| {
            let mut r = FormulaResult {
                formula,
                max_rel_error: 0.0,
                worst_sample: 0,
                worst_omega: f64::NAN,
                points: 0,
            };
            for (i, worst) in per_sample.iter().enumerate() {
                let (e, w, n) = worst[j];
                r.points += n;
                if e > r.max_rel_error || r.worst_omega.is_nan() {
                    r.max_rel_error = e;
                    r.worst_sample = i;
                    r.worst_omega = w;
                }
            }
            r
        })
        .collect();

    let mut table = Table::new("verify");
    table.comment(format!(
        "seed = {seed}, samples = {samples}, tol = {}, grid points = {GRID_POINTS}",
        num(tol)
    ));
    table.row([
        "formula",
        "max_rel_error",
        "worst_sample",
        "worst_omega_rad_s",
        "points",
        "status",
    ]);
    for r in &results {
        table.row([
            r.formula.name().to_string(),
            num(r.max_rel_error),
            r.worst_sample.to_string(),
            num(r.worst_omega),
            r.points.to_string(),
            if r.max_rel_error <= tol {
                "pass"
            } else {
                "fail"
            }
            .to_string(),
        ]);
    }
    VerifyOutcome {
        results,
        tol,
        report: table.finish(Vec::new()),
    }
}
