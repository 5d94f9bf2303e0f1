use lqfi_core::channels::{
    ad_amplitude, ad_amplitude_half_coefficient, ad_amplitude_oracle, ad_state, dephasing_coherence,
    dephasing_state, depol_apply, depol_apply_pauli_sum, depol_apply_with_memory, depol_memory,
    depol_memory_overdamped, depol_state_closed, evolve, AmplitudeDampingParams, ChannelSpec,
    DephasingParams, DepolarizingParams,
};
use lqfi_core::measures::{lqfi, measure_pair, s_matrix};
use lqfi_core::states::{random_state, x_state};
use lqfi_core::{CorrelationTriple, DensityMatrix, Error};
use proptest::prelude::*;

fn assert_density(rho: &DensityMatrix) {
    DensityMatrix::new(rho.matrix().clone()).expect("valid density matrix");
}

#[test]
fn dephasing_lqfi_is_coherence_squared() {
    for s in [0.5, 1.0, 2.0, 4.0] {
        let p = DephasingParams::new(s, 1.0).unwrap();
        for i in 0..50 {
            let t = i as f64 * 30.0 / 49.0;
            let rho = dephasing_state(t, &p).unwrap();
            assert_density(&rho);
            let coh = dephasing_coherence(t, &p).unwrap();
            assert!((lqfi(&rho).unwrap() - coh * coh).abs() < 1e-8, "s = {s}, t = {t}");
        }
    }
}

#[test]
fn dephasing_s_matrix_structure() {
    let p = DephasingParams::new(3.0, 2.0).unwrap();
    let coh = dephasing_coherence(0.8, &p).unwrap();
    let s = s_matrix(&dephasing_state(0.8, &p).unwrap()).unwrap();
    let want = [0.0, 0.0, 1.0 - coh * coh];
    for i in 0..3 {
        for j in 0..3 {
            let w = if i == j { want[i] } else { 0.0 };
            assert!((s.get(i, j) - w).abs() < 1e-12);
        }
    }
}

#[test]
fn amplitude_lqfi_is_amplitude_squared() {
    for (ratio, delta) in [(0.3, 0.0), (2.0, 0.0), (5.0, 0.0), (1.0, 0.5)] {
        let p = AmplitudeDampingParams::new(ratio, 1.0, delta).unwrap();
        for i in 0..50 {
            let t = i as f64 * 25.0 / 49.0;
            let rho = ad_state(t, &p);
            assert_density(&rho);
            let r2 = ad_amplitude(t, &p).norm_sqr();
            assert!((lqfi(&rho).unwrap() - r2).abs() < 1e-8, "λ/γ₀ = {ratio}, t = {t}");
        }
    }
}

#[test]
fn amplitude_closed_form_matches_memory_equation() {
    for (ratio, delta) in [(0.3, 0.0), (2.0, 0.0), (5.0, 0.0), (1.0, 0.5)] {
        let p = AmplitudeDampingParams::new(ratio, 1.0, delta).unwrap();
        let dt = 1e-3 / p.max_rate();
        let oracle = ad_amplitude_oracle(25.0, &p, dt).unwrap();
        let err = oracle.max_deviation(|t| ad_amplitude(t, &p));
        assert!(err < 1e-5, "λ/γ₀ = {ratio}, Δ = {delta}: {err}");
    }
}

#[test]
fn printed_half_coefficient_fails_the_oracle() {
    let worst = [(0.3, 0.0), (2.0, 0.0), (5.0, 0.0), (1.0, 0.5)]
        .iter()
        .map(|&(ratio, delta)| {
            let p = AmplitudeDampingParams::new(ratio, 1.0, delta).unwrap();
            let oracle = ad_amplitude_oracle(25.0, &p, 1e-3 / p.max_rate()).unwrap();
            oracle.max_deviation(|t| ad_amplitude_half_coefficient(t, &p))
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-2, "{worst}");
}

#[test]
fn oracle_rejects_coarse_step() {
    let p = AmplitudeDampingParams::new(5.0, 1.0, 0.0).unwrap();
    assert!(matches!(
        ad_amplitude_oracle(1.0, &p, 1e-3),
        Err(Error::StepTooLarge { .. })
    ));
}

#[test]
fn markovian_amplitude_is_monotone() {
    for ratio in [3.0, 5.0] {
        let p = AmplitudeDampingParams::new(ratio, 1.0, 0.0).unwrap();
        let values: Vec<f64> = (0..2000).map(|i| ad_amplitude(i as f64 * 0.0125, &p).norm()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn depolarizing_routes_agree() {
    for mu in [3.0, 5.0] {
        for r in [(0.6, -0.4, 0.2), (1.0, -1.0, 1.0), (0.2, 0.1, -0.5)] {
            let r = CorrelationTriple::new(r.0, r.1, r.2).unwrap();
            let p = DepolarizingParams::new(mu, r).unwrap();
            let rho0 = x_state(&r).unwrap();
            for i in 0..=200 {
                let nu = i as f64 * 0.05;
                let closed = depol_state_closed(nu, &p);
                let summed = depol_apply_pauli_sum(&rho0, nu, mu).unwrap();
                assert!(summed.matrix().max_abs_diff(closed.matrix()) < 1e-10);
                if let Ok(kraus) = depol_apply(&rho0, nu, mu) {
                    assert!(kraus.matrix().max_abs_diff(closed.matrix()) < 1e-10);
                }
            }
        }
    }
}

#[test]
fn evolve_yields_valid_states() {
    let specs = [
        ChannelSpec::Dephasing(DephasingParams::new(4.0, 1.0).unwrap()),
        ChannelSpec::AmplitudeDamping(AmplitudeDampingParams::new(0.3, 1.0, 0.0).unwrap()),
        ChannelSpec::Depolarizing(
            DepolarizingParams::new(5.0, CorrelationTriple::new(0.6, -0.4, 0.2).unwrap()).unwrap(),
        ),
    ];
    for spec in &specs {
        let w = spec.default_window();
        for i in 0..100 {
            let t = w.start + w.len() * i as f64 / 99.0;
            let rho = evolve(spec, t).unwrap();
            assert_density(&rho);
            let pair = measure_pair(&rho).unwrap();
            assert!(pair.lqu <= pair.lqfi + 1e-9 && pair.lqfi <= 2.0 * pair.lqu + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// With the overdamped memory function the map is CP for all ν and the
    /// measures never increase.
    #[test]
    fn overdamped_depolarizing_is_contractive(seed in any::<u64>(), m in 0.05f64..0.95) {
        let rho0 = random_state(seed);
        let mut previous = measure_pair(&rho0).unwrap();
        for i in 1..=60 {
            let upsilon = depol_memory_overdamped(i as f64 * 0.1, m);
            prop_assert!((0.0..=1.0).contains(&upsilon));
            let rho = depol_apply_with_memory(&rho0, upsilon).unwrap();
            let pair = measure_pair(&rho).unwrap();
            prop_assert!(pair.lqfi <= previous.lqfi + 1e-10);
            prop_assert!(pair.lqu <= previous.lqu + 1e-10);
            previous = pair;
        }
    }

    #[test]
    fn depolarizing_memory_bounded(nu in 0.0f64..20.0, mu in 0.5f64..10.0) {
        prop_assert!(depol_memory(nu, mu).abs() <= 1.0 + 1e-15);
    }
}
