use proptest::prelude::*;
use qperm::linalg::{min_hermitian_eigenvalue, CMat};
use qperm::random::{complex_gaussian, random_triple};
use qperm::schurmann::SchurmannTriple;
use qperm::wordalg::{LinComb, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn triple(seed: u64) -> (SchurmannTriple, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_triple(4, 3, &mut rng), rng)
}

fn random_lincomb(n: usize, rng: &mut ChaCha8Rng) -> LinComb {
    let mut x = LinComb::zero(n);
    for _ in 0..3 {
        let w = Word::random_raw(n, rng.random_range(0..=3), rng);
        x = x.add(&LinComb::from_word(w).scale(complex_gaussian(rng))).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eta_is_a_cocycle(seed in any::<u64>()) {
        let (t, mut rng) = triple(seed);
        let n = t.n();
        let a = random_lincomb(n, &mut rng);
        let b = random_lincomb(n, &mut rng);
        let lhs = t.eta(&a.mul(&b).unwrap()).unwrap();
        let rhs = t.rep().apply(&a).unwrap() * t.eta(&b).unwrap() + t.eta(&a).unwrap() * b.counit();
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn generator_is_hermitian_and_vanishes_on_unit(seed in any::<u64>()) {
        let (t, mut rng) = triple(seed);
        let a = random_lincomb(t.n(), &mut rng);
        let l = t.gen_functional(&a).unwrap();
        let l_adj = t.gen_functional(&a.adjoint()).unwrap();
        prop_assert!((l - l_adj.conj()).norm() < 1e-9);
        prop_assert!(t.gen_word(&Word::unit(t.n())).unwrap().norm() == 0.0);
    }

    #[test]
    fn conditionally_positive(seed in any::<u64>()) {
        let (t, mut rng) = triple(seed);
        let n = t.n();
        let family: Vec<LinComb> = (0..5).map(|_| random_lincomb(n, &mut rng).centered()).collect();
        let gram = CMat::from_fn(5, 5, |i, j| t.gen_functional(&family[i].adjoint().mul(&family[j]).unwrap()).unwrap());
        prop_assert!(min_hermitian_eigenvalue(&gram) >= -1e-8);
    }

    #[test]
    fn values_respect_the_relations(seed in any::<u64>()) {
        let (t, mut rng) = triple(seed);
        let n = t.n();
        for _ in 0..20 {
            let w = Word::random_raw(n, rng.random_range(1..=5), &mut rng);
            let (eta, l) = (t.eta_word(&w).unwrap(), t.gen_word(&w).unwrap());
            match w.reduce() {
                Some(r) => {
                    prop_assert!((eta - t.eta_word(&r).unwrap()).norm() < 1e-9);
                    prop_assert!((l - t.gen_word(&r).unwrap()).norm() < 1e-9);
                }
                None => {
                    prop_assert!(eta.norm() < 1e-9);
                    prop_assert!(l.norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn split_evaluation_is_bracketing_invariant(seed in any::<u64>()) {
        let (t, mut rng) = triple(seed);
        let n = t.n();
        let u = Word::random_raw(n, rng.random_range(0..=3), &mut rng);
        let v = Word::random_raw(n, rng.random_range(0..=3), &mut rng);
        let whole = t.gen_word(&u.concat(&v).unwrap()).unwrap();
        prop_assert!((whole - t.gen_split(&u, &v).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn symmetrization_is_antipode_invariant(seed in any::<u64>()) {
        let (t, mut rng) = triple(seed);
        let s = t.symmetrize();
        let w = Word::random_raw(t.n(), rng.random_range(1..=4), &mut rng);
        let a = s.value_word(&w).unwrap();
        let b = s.value(&LinComb::from_word(w).antipode()).unwrap();
        prop_assert!((a - b).norm() < 1e-9);
    }
}

#[test]
fn eta_norm_of_generators_matches_minus_twice_the_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let t = random_triple(4, 3, &mut rng);
        let n = t.n();
        for i in 1..=n {
            for j in 1..=n {
                // L(p_ij) = L(p_ij* p_ij) = ‖η(p_ij)‖² + 2 L(p_ij) when i ≠ j
                let w = Word::generator(n, i, j).unwrap();
                let l = t.gen_word(&w).unwrap();
                let e = t.eta_word(&w).unwrap().norm_squared();
                let eps = w.counit();
                assert!((l.re * (1.0 - 2.0 * eps) - e).abs() < 1e-9 * (1.0 + e));
            }
        }
    }
}
