use proptest::prelude::*;
use qperm::central::{ad_invariant_value, character_polynomial, character_value, dims, fusion_decompose, AdInvariantSpec, Polynomial};
use qperm::linalg::C64;

proptest! {
    #[test]
    fn fusion_rules_preserve_dimension(n in 4usize..=9, r in 0usize..=6, s in 0usize..=6) {
        let d = dims(n, r + s).unwrap().dims;
        let total: u128 = fusion_decompose(r, s).iter().map(|&t| d[t]).sum();
        prop_assert_eq!(d[r] * d[s], total);
    }

    #[test]
    fn characters_multiply_by_fusion(r in 0usize..=5, s in 0usize..=5, x in 0.0f64..9.0) {
        let lhs = character_value(r, x) * character_value(s, x);
        let rhs: f64 = fusion_decompose(r, s).iter().map(|&t| character_value(t, x)).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn characters_evaluate_to_dimensions_at_n(n in 4usize..=9, s in 0usize..=8) {
        let d = dims(n, s).unwrap().dims[s] as f64;
        prop_assert!((character_polynomial(s).eval(n as f64) - d).abs() <= 1e-9 * d);
    }

    #[test]
    fn hunt_form_is_conditionally_positive(
        n in 4usize..=9,
        a in 0.0f64..3.0,
        atoms in prop::collection::vec((0.0f64..1.0, 0.01f64..2.0), 0..4),
        h in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
    ) {
        let atoms = atoms.into_iter().map(|(u, w)| (u * n as f64, w)).collect();
        let spec = AdInvariantSpec::new(n, a, atoms).unwrap();
        let mut g = vec![C64::new(0.0, 0.0); h.len() + 1];
        for (k, &(re, im)) in h.iter().enumerate() {
            let c = C64::new(re, im);
            g[k + 1] += c;
            g[k] -= c * n as f64;
        }
        let f = Polynomial::abs_squared(&g);
        // cancellation in f′(n) and f(x) − f(n) scales with the coefficient mass
        let mass: f64 = f.coeffs.iter().enumerate().map(|(k, c)| c.abs() * (n as f64).powi(k as i32) * (k as f64 + 1.0)).sum();
        let weight = 1.0 + a + spec.nu.atoms.iter().map(|&(x, w)| w / (n as f64 - x)).sum::<f64>();
        prop_assert!(spec.hunt_value(&f) >= -1e-13 * mass * weight);
    }

    #[test]
    fn ad_invariant_values_are_non_positive(n in 4usize..=9, a in 0.0f64..3.0, s in 0usize..=6) {
        let spec = AdInvariantSpec::new(n, a, vec![(0.5, 1.0), (n as f64 - 1.0, 0.3)]).unwrap();
        prop_assert!(ad_invariant_value(&spec, s, 1, 1).unwrap() <= 1e-12);
    }
}
