use optospring::formulas::{
    double_pass_effective, hybrid_full_spectrum, lossy_real_spectrum, lossy_virtual_spectrum,
    position_meter_spectrum, RigidityMode,
};
use optospring::network::{combine_optimal, extract_spring};
use optospring::optimize::design_with_rigidity;
use optospring::{epsilon, Chain, Density, FrequencyGrid, MassSign, Susceptibility};
use proptest::prelude::*;

fn chi_strategy() -> impl Strategy<Value = Susceptibility> {
    prop_oneof![
        Just(Susceptibility::FreeMass),
        (0.1..3.0f64, any::<bool>()).prop_map(|(w0, pos)| {
            let sign = if pos {
                MassSign::Positive
            } else {
                MassSign::Negative
            };
            Susceptibility::oscillator(w0 * w0, sign).unwrap()
        }),
    ]
}

fn grid_strategy() -> impl Strategy<Value = FrequencyGrid> {
    (0.05..0.5f64).prop_map(|lo| FrequencyGrid::log(lo, 100.0 * lo, 30).unwrap())
}

fn close(a: Density, b: Density, tol: f64) -> bool {
    match (a, b) {
        (Density::Finite(x), Density::Finite(y)) => (x - y).abs() <= tol * x.abs().max(y.abs()),
        (Density::Degenerate, Density::Degenerate) => true,
        _ => false,
    }
}

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn position_meter(chi in chi_strategy(), ups in 0.1..=10.0f64, grid in grid_strategy()) {
        let chain = Chain::single_pass(chi.clone(), ups, 0.0, 1.0).unwrap();
        for (w, o) in grid.iter().zip(chain.sum_noise_spectra(&grid)) {
            let f = Density::Finite(position_meter_spectrum(ups, &chi, w).unwrap());
            prop_assert!(close(f, o, TOL), "Ω = {w}: {f:?} vs {o:?}");
        }
    }

    #[test]
    fn virtual_rigidity(chi in chi_strategy(), ups in 0.1..=10.0f64, phi in -1.4..1.4f64,
                        eta in 0.5..=1.0f64, grid in grid_strategy()) {
        let chain = Chain::single_pass(chi.clone(), ups, phi, eta).unwrap();
        for (w, o) in grid.iter().zip(chain.sum_noise_spectra(&grid)) {
            let f = lossy_virtual_spectrum(ups, phi, eta, &chi, w).unwrap();
            prop_assert!(close(f, o, TOL), "Ω = {w}: {f:?} vs {o:?}");
        }
    }

    #[test]
    fn real_rigidity(chi in chi_strategy(), ups in 0.1..=10.0f64, psi in -1.4..1.4f64,
                     eta in 0.5..=1.0f64, grid in grid_strategy()) {
        let chain = Chain::double_pass(chi.clone(), ups, 0.0, psi, eta).unwrap();
        let (upsilon_k, kappa) = double_pass_effective(ups, psi);
        for (w, o) in grid.iter().zip(chain.sum_noise_spectra(&grid)) {
            let f = Density::Finite(lossy_real_spectrum(upsilon_k, kappa, eta, &chi, w).unwrap());
            prop_assert!(close(f, o, TOL), "Ω = {w}: {f:?} vs {o:?}");
        }
    }

    #[test]
    fn spring_is_odd_in_psi(ups in 0.1..=10.0f64, psi in -1.5..1.5f64, phi in -1.4..1.4f64) {
        let k = |p: f64| extract_spring(&Chain::double_pass(Susceptibility::FreeMass, ups, phi, p, 1.0).unwrap());
        prop_assert!((k(psi) + k(-psi)).abs() <= 1e-12 * ups * ups);
    }

    #[test]
    fn hybrid(chi_i in chi_strategy(), omega_s in 0.1..3.0f64, ups in 0.1..=10.0f64, r in 0.0..=2.0f64,
              eta_i in 0.5..=1.0f64, eta_s in 0.5..=1.0f64, k in -20.0..20.0f64, real in any::<bool>(),
              grid in grid_strategy()) {
        let mode = if real { RigidityMode::Real } else { RigidityMode::Virtual };
        let design = design_with_rigidity(ups, chi_i, Susceptibility::spin(omega_s).unwrap(), k, mode)
            .unwrap()
            .with_squeezing(r)
            .unwrap()
            .with_losses(epsilon(eta_i).unwrap(), epsilon(eta_s).unwrap())
            .unwrap();
        let system = design.system().unwrap();
        for (w, o) in grid.iter().zip(system.sum_noise_spectra(&grid)) {
            let f = hybrid_full_spectrum(&design.params, w).unwrap();
            prop_assert!(close(f, o, TOL), "Ω = {w}: {f:?} vs {o:?}");
        }
    }

    #[test]
    fn combine_is_invariant_under_aux_rescaling(s_i in 0.1..10.0f64, s_s in 0.1..10.0f64,
                                                 c in -1.0..1.0f64, scale in 1e-3..1e3f64) {
        // keep the pair positive semidefinite
        let s_is = c * (s_i * s_s).sqrt();
        let a = combine_optimal(s_i, s_s, s_is).value();
        let b = combine_optimal(s_i, s_s * scale * scale, s_is * scale).value();
        prop_assert!((a - b).abs() <= 1e-12 * s_i);
        prop_assert!(a <= s_i);
    }
}
