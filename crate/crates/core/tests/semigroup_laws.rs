use proptest::prelude::*;
use qperm::config::{MAGIC_TOL, TERM_BUDGET};
use qperm::random::{complex_gaussian, random_triple};
use qperm::semigroup::{conv_exp, conv_exp_lincomb, convolve, fundamental_semigroup, GeneratorMatrix};
use qperm::wordalg::{LinComb, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transition_matrices_form_a_stochastic_semigroup(seed in any::<u64>(), s in 0.0f64..1.5, t in 0.0f64..1.5) {
        let tr = random_triple(4, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let ms = fundamental_semigroup(&tr, s, MAGIC_TOL).unwrap();
        let mt = fundamental_semigroup(&tr, t, MAGIC_TOL).unwrap();
        let mst = fundamental_semigroup(&tr, s + t, MAGIC_TOL).unwrap();
        prop_assert!((&ms * &mt - &mst).abs().max() < 1e-10);
        for i in 0..tr.n() {
            prop_assert!((ms.row(i).sum() - 1.0).abs() < 1e-10);
            prop_assert!((ms.column(i).sum() - 1.0).abs() < 1e-10);
            prop_assert!(ms.row(i).iter().all(|&x| x >= -1e-12));
        }
    }

    #[test]
    fn states_are_positive(seed in any::<u64>(), t in 0.05f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tr = random_triple(3, 2, &mut rng);
        let n = tr.n();
        let mut a = LinComb::zero(n);
        for _ in 0..3 {
            let w = Word::random_raw(n, rng.random_range(0..=2), &mut rng);
            a = a.add(&LinComb::from_word(w).scale(complex_gaussian(&mut rng))).unwrap();
        }
        let v = conv_exp_lincomb(&tr, t, &a.adjoint().mul(&a).unwrap(), 25, TERM_BUDGET).unwrap();
        prop_assert!(v.re >= -1e-8 * (1.0 + a.max_coefficient().powi(2)));
        prop_assert!(v.im.abs() < 1e-8 * (1.0 + a.max_coefficient().powi(2)));
    }
}

#[test]
fn convolution_semigroup_law_on_short_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..6 {
        let tr = random_triple(3, 2, &mut rng);
        let n = tr.n();
        let (s, t) = (0.3, 0.5);
        let ws = |w: &Word| conv_exp(&tr, s, w, 25, TERM_BUDGET).unwrap().value;
        let wt = |w: &Word| conv_exp(&tr, t, w, 25, TERM_BUDGET).unwrap().value;
        for _ in 0..5 {
            let w = Word::random_reduced(n, rng.random_range(1..=2), &mut rng);
            let lhs = convolve(&ws, &wt, &w, TERM_BUDGET).unwrap();
            let rhs = conv_exp(&tr, s + t, &w, 25, TERM_BUDGET).unwrap().value;
            assert!((lhs - rhs).norm() < 1e-9, "{w}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn generator_matrix_rejects_bad_rows() {
    let a = nalgebra::DMatrix::from_row_slice(2, 2, &[-1.0, 0.5, 1.0, -1.0]);
    assert!(GeneratorMatrix::new(a, 1e-9).is_err());
    let b = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
    assert!(GeneratorMatrix::new(b, 1e-9).is_err());
}
