use proptest::prelude::*;

use randprep::bounds::{resource_plan, DecayKind, DecayModel, TCountModel};
use randprep::generators::{synthetic_state, SignPattern, SyntheticSpec};
use randprep::{build_ensemble, compute_mixing_bounds, ensemble_trace_distance, partition};

fn kind_strategy() -> impl Strategy<Value = (DecayKind, f64)> {
    prop_oneof![
        (0.3f64..0.95).prop_map(|r| (DecayKind::Geometric, r)),
        (1.2f64..3.0).prop_map(|r| (DecayKind::PowerLaw, r)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn small_tail_regime_respects_curves(
        (kind, rate) in kind_strategy(),
        dim in 16usize..512,
        seed in any::<u64>(),
        frac in 1e-3f64..0.5,
    ) {
        let spec = SyntheticSpec { kind, rate, dim, seed, signs: SignPattern::Random };
        let psi = synthetic_state(&spec).unwrap();
        let p = partition(&psi, psi.max_magnitude() * frac).unwrap();
        prop_assume!(!p.tail_is_empty() && p.c_ratio <= 4.0 && p.eps <= 0.2);
        let e = build_ensemble(&p, &psi).unwrap();
        let b = compute_mixing_bounds(&e, &psi).unwrap();
        let d = ensemble_trace_distance(&e, &psi).unwrap();
        prop_assert!(b.a_max <= b.appendix_a_bound + 5.0 * p.eps * p.eps);
        prop_assert!(d <= b.lemma_bound + 1e-10);
        prop_assert!(d <= b.theory_curve + 1e-12, "theory curve {} < {}", b.theory_curve, d);
        prop_assert!(d <= b.lemma_curve + 1e-12);
    }

    #[test]
    fn kept_counts_grow_as_tau_shrinks(rate in 0.55f64..0.97, e1 in 1.0f64..5.0, de in 0.1f64..3.0) {
        let m = DecayModel::new(DecayKind::Geometric, rate, 1 << 30).unwrap();
        let loose = resource_plan(&m, 10f64.powf(-e1), TCountModel::default()).unwrap();
        let strict = resource_plan(&m, 10f64.powf(-(e1 + de)), TCountModel::default()).unwrap();
        prop_assert!(strict.k_det >= loose.k_det && strict.k_rand >= loose.k_rand);
    }
}
