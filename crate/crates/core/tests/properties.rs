use num_complex::Complex64;
use proptest::prelude::*;
use qevent_core::oracle::{born_rule_joint, oracle_report, report_distance};
use qevent_core::scenarios;
use qevent_core::{
    arrival_distribution, build_clock, build_history, evolve, joint_time_distribution, to_time_domain,
    uncertainty_report, ArrivalEvent, EventSpec, FrequencyGrid, Projector, SpectralAmplitude, Tolerances,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_scenario(seed: u64, d: usize, dim: usize) -> scenarios::Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = rng.random_range(0.2..3.0);
    let hs = scenarios::random_hermitian(&mut rng, dim, norm).unwrap();
    let psi0 = scenarios::random_state(&mut rng, dim).unwrap();
    let n = scenarios::random_state(&mut rng, dim).unwrap().into_amplitudes();
    scenarios::Scenario {
        name: format!("prop-{seed}"),
        clock: build_clock(d, rng.random_range(0.05..0.4)).unwrap(),
        hs,
        psi0,
        event: EventSpec::new(
            "rank1",
            Projector::from_orthonormal(scenarios::system_space(dim).unwrap(), &[n]).unwrap(),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn joint_distribution_matches_born_rule(seed in any::<u64>(), d in prop::sample::select(vec![4usize, 8, 16]), dim in 2usize..5) {
        let sc = small_scenario(seed, d, dim);
        let h = sc.history().unwrap();
        let fast = joint_time_distribution(&h, &sc.event).unwrap();
        let dense = born_rule_joint(&h, &sc.event).unwrap();
        for (a, b) in fast.iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_match_oracle_and_respect_robertson(seed in any::<u64>(), d in prop::sample::select(vec![8usize, 16, 32]), dim in 2usize..4) {
        let sc = small_scenario(seed, d, dim);
        let h = sc.history().unwrap();
        let tol = Tolerances::default();
        match uncertainty_report(&h, &sc.event, &tol) {
            Ok(r) => {
                let o = oracle_report(&h, &sc.event, &tol).unwrap();
                prop_assert!(report_distance(&r, &o).unwrap() < 1e-10);
                prop_assert!((r.p_t_given_event.iter().sum::<f64>() - 1.0).abs() < 1e-10);
                prop_assert!(r.product_conditional >= r.robertson_conditional * (1.0 - 1e-10) - 1e-12);
                prop_assert!(r.product_unconditional >= r.robertson_unconditional * (1.0 - 1e-10) - 1e-12);
                prop_assert!(r.p_event <= 1.0 + 1e-12);
            }
            Err(qevent_core::Error::EventNeverHappens { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn history_is_normalized(seed in any::<u64>(), d in prop::sample::select(vec![8usize, 64, 256])) {
        let sc = small_scenario(seed, d, 3);
        let h = sc.history().unwrap();
        prop_assert!((h.psi().norm() - 1.0).abs() < 1e-12);
        let e = h.energy_equality_check();
        prop_assert!(e.std_sys >= 0.0 && e.std_clock >= 0.0);
    }

    #[test]
    fn evolution_is_unitary_and_composes(seed in any::<u64>(), t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let sc = small_scenario(seed, 4, 4);
        let a = evolve(&evolve(&sc.psi0, &sc.hs, t1).unwrap(), &sc.hs, t2).unwrap();
        let b = evolve(&sc.psi0, &sc.hs, t1 + t2).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-12);
        prop_assert!((a.amplitudes() - b.amplitudes()).norm() < 1e-11);
    }

    #[test]
    fn photon_parseval_and_shift(seed in any::<u64>(), shift in 0usize..64) {
        let grid = FrequencyGrid::new(512, 0.0, 30.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Complex64> = grid.omegas().iter().map(|&w| {
            let env = (-(w - 15.0) * (w - 15.0) / 8.0).exp();
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * env
        }).collect();
        let phi = SpectralAmplitude::normalize(grid, raw).unwrap();
        let tilde = to_time_domain(&phi);
        let norm: f64 = tilde.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dt();
        prop_assert!((norm - 1.0).abs() < 1e-12);

        let base = arrival_distribution(&phi, &ArrivalEvent::new(0.0)).unwrap();
        let moved = arrival_distribution(&phi, &ArrivalEvent::new(shift as f64 * grid.dt())).unwrap();
        for k in 0..512 {
            prop_assert!((moved.p[(k + shift) % 512] - base.p[k]).abs() < 1e-10);
        }
    }
}

#[test]
fn identity_event_reproduces_uniform_clock() {
    let sc = small_scenario(9, 16, 3);
    let h = build_history(&sc.clock, &sc.hs, &sc.psi0).unwrap();
    let all = EventSpec::new("always", Projector::identity(scenarios::system_space(3).unwrap()));
    let r = uncertainty_report(&h, &all, &Tolerances::default()).unwrap();
    assert!((r.p_event - 1.0).abs() < 1e-12);
    let ts = qevent_core::time_statistics(&[1.0 / 16.0; 16], sc.clock.times());
    assert!((r.t_std - ts.t_std).abs() < 1e-12);
    assert!(r.system_energy.is_some());
}
