//! Parameter optimization: pointwise in Υ, over frequency bands, and the
//! matched two-channel design.

mod band;
mod design;
mod golden;

pub use band::{
    minimize_band, BandObjective, BandOptimum, BandValue, DescentOptions, ParamRange, SpectrumFn,
};
pub use design::{design_hybrid, design_with_rigidity, realize_auxiliary, HybridDesign};
pub use golden::{golden_section, ScalarMinimum};

use serde::Serialize;

use crate::elements::epsilon;
use crate::error::{self, Result};
use crate::susceptibility::Susceptibility;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseOptimum {
    /// Optimal effective coupling Υ_ϰ (non-negative root).
    pub upsilon: f64,
    pub s_min: f64,
    /// The radicand vanished: the optimum is the Υ → 0 limit.
    pub degenerate: bool,
}

/// Minimizes the lossy virtual-rigidity density over Υ_ϰ at fixed ϰ:
/// `Υ_opt² = √(|χ⁻¹+ϰ|² + ε²|χ|⁻²)`, attaining that same value as `S_min`.
pub fn optimal_upsilon_pointwise(
    chi: &Susceptibility,
    varkappa: f64,
    eta: f64,
    omega: f64,
) -> Result<PointwiseOptimum> {
    let eps = epsilon(eta)?;
    error::finite("varkappa", varkappa)?;
    let chi_inv = chi.inverse_at(omega);
    let s_min = (chi_inv + varkappa).hypot(eps * chi_inv);
    Ok(PointwiseOptimum {
        upsilon: s_min.sqrt(),
        s_min,
        degenerate: s_min == 0.0,
    })
}

/// Minimum over Υ_κ of the lossy physical-spring density:
/// `|χ⁻¹+κ|·√(1+ε²)`, at `Υ_κ² = |χ⁻¹+κ|·√(1+ε²)`.
pub fn optimal_upsilon_real(
    chi: &Susceptibility,
    kappa: f64,
    eta: f64,
    omega: f64,
) -> Result<PointwiseOptimum> {
    let eps = epsilon(eta)?;
    error::finite("kappa", kappa)?;
    let s_min = (chi.inverse_at(omega) + kappa).abs() * eps.hypot(1.0);
    Ok(PointwiseOptimum {
        upsilon: s_min.sqrt(),
        s_min,
        degenerate: s_min == 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Density;
    use crate::formulas::{
        double_pass_effective, lossy_real_spectrum, lossy_virtual_terms_effective, sql,
        RigidityMode,
    };
    use crate::grid::FrequencyGrid;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    const FREE: Susceptibility = Susceptibility::FreeMass;

    fn virtual_s(ups: f64, k: f64, eta: f64, w: f64) -> f64 {
        lossy_virtual_terms_effective(ups, k, eta, &FREE, w)
            .unwrap()
            .total()
    }

    #[test]
    fn lossless_sql_touching() {
        let w = 1.7;
        let opt = optimal_upsilon_pointwise(&FREE, 0.0, 1.0, w).unwrap();
        assert_relative_eq!(opt.upsilon * opt.upsilon, w * w, max_relative = 1e-15);
        assert_relative_eq!(opt.s_min, sql(&FREE, w), max_relative = 1e-15);
    }

    #[test]
    fn bound_saturation() {
        let (w, eta) = (0.8, 0.6);
        let opt = optimal_upsilon_pointwise(&FREE, w * w, eta, w).unwrap();
        assert_relative_eq!(
            opt.s_min,
            epsilon(eta).unwrap() * w * w,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            virtual_s(opt.upsilon, w * w, eta, w),
            opt.s_min,
            max_relative = 1e-12
        );
    }

    #[test]
    fn degenerate_radicand() {
        let w = 0.8;
        let opt = optimal_upsilon_pointwise(&FREE, w * w, 1.0, w).unwrap();
        assert!(opt.degenerate);
        assert_eq!(opt.upsilon, 0.0);
    }

    #[test]
    fn grid_search_never_beats_pointwise_optimum() {
        let (w, k, eta) = (1.3, 0.4, 0.75);
        let opt = optimal_upsilon_pointwise(&FREE, k, eta, w).unwrap();
        let n = 10_000;
        for i in 0..n {
            let ups = 1e-2 * (1e4f64).powf(i as f64 / (n - 1) as f64);
            assert!(virtual_s(ups, k, eta, w) >= opt.s_min * (1.0 - 1e-9));
        }
        // ±1% around the optimum does not help
        for f in [0.99, 1.01] {
            assert!(virtual_s(opt.upsilon * f, k, eta, w) >= opt.s_min);
        }
    }

    #[test]
    fn real_pointwise() {
        let (w, k, eta) = (1.1, 0.3, 0.8);
        let opt = optimal_upsilon_real(&FREE, k, eta, w).unwrap();
        let s = lossy_real_spectrum(opt.upsilon, k, eta, &FREE, w).unwrap();
        assert_relative_eq!(s, opt.s_min, max_relative = 1e-12);
        for f in [0.99, 1.01] {
            assert!(lossy_real_spectrum(opt.upsilon * f, k, eta, &FREE, w).unwrap() >= opt.s_min);
        }
    }

    fn upsilon_objective(grid: FrequencyGrid, k: f64, eta: f64) -> BandObjective {
        BandObjective::new(
            grid,
            None,
            vec![ParamRange::new("upsilon", 0.01, 10.0)],
            Box::new(move |x, w| Density::Finite(virtual_s(x[0], k, eta, w))),
        )
        .unwrap()
    }

    #[test]
    fn single_point_band_reduces_to_pointwise() {
        let (w, k, eta) = (0.9, 0.2, 0.7);
        let obj = upsilon_objective(FrequencyGrid::from_points(vec![w]).unwrap(), k, eta);
        let res = minimize_band(&obj, &DescentOptions::default()).unwrap();
        let opt = optimal_upsilon_pointwise(&FREE, k, eta, w).unwrap();
        assert_relative_eq!(res.objective, opt.s_min, max_relative = 1e-9);
        assert_relative_eq!(
            res.get("upsilon").unwrap(),
            opt.upsilon,
            max_relative = 1e-4
        );
    }

    #[test]
    fn band_matches_dense_grid() {
        let grid = FrequencyGrid::log(0.3, 3.0, 15).unwrap();
        let obj = upsilon_objective(grid, 0.5, 0.9);
        let res = minimize_band(&obj, &DescentOptions::default()).unwrap();
        let n = 200_000;
        let dense = (0..n)
            .map(|i| 0.01 + (10.0 - 0.01) * i as f64 / (n - 1) as f64)
            .map(|u| obj.evaluate(&[u]).value)
            .fold(f64::INFINITY, f64::min);
        assert!(
            res.objective <= dense * (1.0 + 1e-6),
            "{} vs {}",
            res.objective,
            dense
        );
        assert!(res.objective >= dense * (1.0 - 1e-6));
    }

    #[test]
    fn band_is_deterministic() {
        let make = || upsilon_objective(FrequencyGrid::log(0.2, 5.0, 40).unwrap(), 0.1, 0.8);
        let a = minimize_band(&make(), &DescentOptions::default()).unwrap();
        let b = minimize_band(&make(), &DescentOptions::default()).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.params[0].1.to_bits(), b.params[0].1.to_bits());
    }

    #[test]
    fn psi_optimization_selects_shifted_resonance() {
        // lossless two-pass readout at a single frequency, Υ fixed, ψ free
        let (ups, w0) = (1.0, 0.5);
        let spectrum = move |x: &[f64], w: f64| {
            let (uk, k) = double_pass_effective(ups, x[0]);
            Density::Finite(lossy_real_spectrum(uk, k, 1.0, &FREE, w).unwrap())
        };
        let obj = BandObjective::new(
            FrequencyGrid::from_points(vec![w0]).unwrap(),
            None,
            vec![ParamRange::new("psi", 0.0, FRAC_PI_2 - 1e-3)],
            Box::new(spectrum),
        )
        .unwrap();
        let res = minimize_band(&obj, &DescentOptions::default()).unwrap();

        let n = 300_000;
        let (dense_psi, dense_s) = (0..n)
            .map(|i| (FRAC_PI_2 - 1e-3) * i as f64 / (n - 1) as f64)
            .map(|p| (p, spectrum(&[p], w0).value()))
            .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        assert_relative_eq!(res.objective, dense_s, max_relative = 1e-6);
        let psi = res.get("psi").unwrap();
        assert!((psi - dense_psi).abs() < 1e-3);

        // the optimum sits on the large-ψ branch of sin2ψ = Ω₀²/Υ², close to κ = Ω₀²
        let (_, kappa) = double_pass_effective(ups, psi);
        assert!((kappa - w0 * w0).abs() / (w0 * w0) < 0.1, "κ = {kappa}");
        let branch = FRAC_PI_2 - 0.5 * (w0 * w0 / (ups * ups)).asin();
        assert!((psi - branch).abs() < 0.01, "ψ = {psi}, branch = {branch}");
    }

    #[test]
    fn all_degenerate_band_is_an_error() {
        let obj = BandObjective::new(
            FrequencyGrid::log(1.0, 2.0, 3).unwrap(),
            None,
            vec![ParamRange::new("x", 0.0, 1.0)],
            Box::new(|_, _| Density::Degenerate),
        )
        .unwrap();
        match minimize_band(&obj, &DescentOptions::default()) {
            Err(crate::Error::DegenerateBand { omegas }) => assert_eq!(omegas.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_points_are_excluded() {
        let obj = BandObjective::new(
            FrequencyGrid::from_points(vec![1.0, 2.0]).unwrap(),
            None,
            vec![ParamRange::new("x", 0.0, 1.0)],
            Box::new(|x, w| {
                if w == 1.0 {
                    Density::Degenerate
                } else {
                    Density::Finite((x[0] - 0.25).powi(2) + 3.0)
                }
            }),
        )
        .unwrap();
        let res = minimize_band(&obj, &DescentOptions::default()).unwrap();
        assert_eq!(res.excluded, vec![1.0]);
        assert_relative_eq!(res.objective, 3.0, max_relative = 1e-10);
    }

    #[test]
    fn objective_rejects_bad_weights() {
        let grid = FrequencyGrid::log(1.0, 2.0, 2).unwrap();
        let f = || -> Box<SpectrumFn> { Box::new(|_, _| Density::Finite(1.0)) };
        let p = || vec![ParamRange::new("x", 0.0, 1.0)];
        assert!(BandObjective::new(grid.clone(), Some(vec![1.0]), p(), f()).is_err());
        assert!(BandObjective::new(grid.clone(), Some(vec![-1.0, 2.0]), p(), f()).is_err());
        assert!(BandObjective::new(grid.clone(), Some(vec![0.0, 0.0]), p(), f()).is_err());
        assert!(BandObjective::new(
            grid.clone(),
            None,
            vec![ParamRange::new("x", 1.0, 0.0)],
            f()
        )
        .is_err());
        let ok = BandObjective::new(grid, Some(vec![1.0, 3.0]), p(), f()).unwrap();
        assert_eq!(ok.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn design_limits() {
        let d = design_hybrid(1e-9, 2.0, RigidityMode::Real).unwrap();
        assert!(d.phase_s.abs() < 1e-15);
        assert_relative_eq!(d.upsilon_s, 1.0, max_relative = 1e-15);

        let omega_s = 1.5;
        let ups = SQRT_2 * omega_s;
        let d = design_hybrid(omega_s, ups, RigidityMode::Real).unwrap();
        assert_relative_eq!(d.phase_s, FRAC_PI_4, max_relative = 1e-15);
        assert_relative_eq!(d.upsilon_s, ups / SQRT_2, max_relative = 1e-15);
        assert_eq!(d.params.k, omega_s * omega_s);
    }

    #[test]
    fn design_round_trips() {
        for (omega_s, ups) in [(0.3, 2.0), (1.0, 1.0), (4.0, 0.7), (10.0, 3.0)] {
            let d = design_hybrid(omega_s, ups, RigidityMode::Real).unwrap();
            let (uk, k) = double_pass_effective(d.upsilon_s, d.phase_s);
            assert_relative_eq!(uk, ups, max_relative = 1e-12);
            assert_relative_eq!(k, omega_s * omega_s, max_relative = 1e-12);

            let d = design_hybrid(omega_s, ups, RigidityMode::Virtual).unwrap();
            let (uv, kv) = crate::formulas::virtual_rigidity_params(d.upsilon_s, d.phase_s);
            assert_relative_eq!(uv, ups, max_relative = 1e-12);
            assert_relative_eq!(kv, omega_s * omega_s, max_relative = 1e-12);
        }
    }
}
