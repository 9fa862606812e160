use infoex_core::io::{parse_json, to_json, EnsembleFile, StateFile};
use infoex_core::linalg::{devectorize, hs_inner, max_abs_entry, partial_trace, vectorize};
use infoex_core::measurements::mub_povms;
use infoex_core::random::{
    random_matrix, random_povm, random_projective, random_simplex, random_state,
};
use infoex_core::view::{ensemble_norm, exclusion_audit, info_gain};
use infoex_core::{BipartiteState, RngSpec, Subsystem, Tolerances, WeightedEnsemble};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vectorization_is_an_isometry(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = RngSpec::new(seed, "vec").rng();
        let a = random_matrix(d, &mut rng);
        let b = random_matrix(d, &mut rng);
        let va = vectorize(&a).unwrap();
        let vb = vectorize(&b).unwrap();
        prop_assert!(max_abs_entry(&(devectorize(&va) - &a)) == 0.0);
        let lhs = va.dot(&vb);
        let rhs = hs_inner(&a, &b).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn exclusion_slack_is_nonnegative(seed in any::<u64>(), d in 2usize..5, n in 1usize..5) {
        let mut rng = RngSpec::new(seed, "bound").rng();
        let povms = (0..n)
            .map(|k| if k % 2 == 0 { random_projective(d, &mut rng) } else { random_povm(d, d + 1, &mut rng) })
            .collect::<Result<Vec<_>, _>>()
            .unwrap();
        let e = WeightedEnsemble::new(povms, random_simplex(n, &mut rng)).unwrap();
        let rho = random_state(d, &mut rng);
        let a = exclusion_audit(&e, &rho, &tol()).unwrap();
        prop_assert!(a.slack >= -1e-10);
        prop_assert!((a.lhs - a.lhs_view).abs() < 1e-10);
    }

    #[test]
    fn ensemble_norm_stays_in_unit_interval(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = RngSpec::new(seed, "norm").rng();
        let povms = vec![random_projective(d, &mut rng).unwrap(), random_povm(d, 3, &mut rng).unwrap()];
        let e = WeightedEnsemble::new(povms, random_simplex(2, &mut rng)).unwrap();
        let g = ensemble_norm(&e, &tol()).unwrap();
        prop_assert!(g > 0.0 && g <= 1.0 + 1e-10);
    }

    #[test]
    fn info_gain_never_exceeds_complete_info(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = RngSpec::new(seed, "gain").rng();
        let p = random_povm(d, d + 2, &mut rng).unwrap();
        let rho = random_state(d, &mut rng);
        let g = info_gain(&p, &rho).unwrap();
        prop_assert!(g >= -1e-12);
        prop_assert!(g <= rho.purity() - 1.0 / d as f64 + 1e-12);
    }

    #[test]
    fn state_file_roundtrips(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = RngSpec::new(seed, "state-io").rng();
        let rho = random_state(d, &mut rng);
        let back: StateFile = parse_json(&to_json(&StateFile::from_state(&rho))).unwrap();
        let restored = back.to_state(&tol()).unwrap();
        prop_assert_eq!(restored.matrix(), rho.matrix());
    }

    #[test]
    fn ensemble_file_roundtrips(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = RngSpec::new(seed, "ens-io").rng();
        let povms = mub_povms(d).unwrap();
        let e = WeightedEnsemble::new(povms.clone(), random_simplex(povms.len(), &mut rng)).unwrap();
        let back: EnsembleFile = parse_json(&to_json(&EnsembleFile::from_ensemble(&e))).unwrap();
        let e2 = back.to_ensemble(&tol()).unwrap();
        prop_assert_eq!(e2.weights(), e.weights());
        for (p, q) in e.measurements().iter().zip(e2.measurements()) {
            prop_assert_eq!(p.effects(), q.effects());
        }
    }

    #[test]
    fn partial_traces_are_states(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = RngSpec::new(seed, "ptrace").rng();
        let rho = BipartiteState::from_state(random_state(da * db, &mut rng), (da, db)).unwrap();
        for (keep, d) in [(Subsystem::A, da), (Subsystem::B, db)] {
            let r = partial_trace(rho.matrix(), (da, db), keep).unwrap();
            prop_assert_eq!(r.nrows(), d);
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
        }
    }
}
