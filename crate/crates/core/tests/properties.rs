use proptest::prelude::*;

use randprep::bounds::{geometric_constant, power_law_constant, DecayKind};
use randprep::generators::{synthetic_state, SignPattern, SyntheticSpec};
use randprep::sweep::sweep_row;
use randprep::{build_ensemble, compute_mixing_bounds, normalize, partition};

proptest! {
    #[test]
    fn geometric_constant_increases(r in 0.01f64..0.98, dr in 1e-3f64..0.01) {
        prop_assert!(geometric_constant(r + dr).unwrap() > geometric_constant(r).unwrap());
    }

    #[test]
    fn power_law_constant_decreases(r in 1.05f64..6.0, dr in 1e-2f64..0.5) {
        prop_assert!(power_law_constant(r + dr).unwrap() < power_law_constant(r).unwrap());
    }

    #[test]
    fn ensemble_identities(raw in prop::collection::vec(-1.0f64..1.0, 4..64), frac in 0.05f64..0.9) {
        let n = raw.len().next_power_of_two().trailing_zeros();
        let psi = normalize(&raw, n);
        prop_assume!(psi.is_ok());
        let psi = psi.unwrap();
        let t = psi.max_magnitude() * frac;
        let p = partition(&psi, t).unwrap();
        prop_assume!(!p.tail_is_empty());
        let e = build_ensemble(&p, &psi).unwrap();
        prop_assert!((e.probability_sum() - 1.0).abs() <= 1e-12);
        prop_assert!(e.max_gamma_deviation() <= 1e-12);
        prop_assert!(e.reconstruction_residual(&psi).unwrap() <= 1e-12);
        let b = compute_mixing_bounds(&e, &psi).unwrap();
        prop_assert!((b.b_bias - b.b_closed_form).abs() <= 1e-12);
    }

    #[test]
    fn sweep_rows_respect_lemma(rate in 0.3f64..0.95, dim in 8usize..96, seed in any::<u64>(), frac in 1e-4f64..0.9) {
        let spec = SyntheticSpec { kind: DecayKind::Geometric, rate, dim, seed, signs: SignPattern::Random };
        let psi = synthetic_state(&spec).unwrap();
        let row = sweep_row(&psi, psi.max_magnitude() * frac).unwrap();
        if let Some(v) = row.values {
            prop_assert!(v.dist_rand <= v.lemma_bound + 1e-10);
            prop_assert!((v.dist_det - 2.0 * v.eps).abs() <= 1e-10);
        }
    }
}
