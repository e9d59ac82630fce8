use qperm::cohomology::CocycleTuple;
use qperm::config::MAGIC_TOL;
use qperm::linalg::{CVec, C64};
use qperm::magic::{from_permutation, PermutationRep};
use qperm::perm::Permutation;
use qperm::schurmann::SchurmannTriple;
use qperm::semigroup::fundamental_semigroup;
use qperm::stochsim::{exact_marginals, PermProcessSpec};

/// The triple with ξ_i = √λ on every point of a cycle with rate λ.
fn matching_triple(spec: &PermProcessSpec) -> SchurmannTriple {
    let n = spec.n();
    let mut xs = vec![CVec::zeros(1); n];
    for (cycle, rate) in spec.cycles() {
        for &i in cycle {
            xs[i] = CVec::from_element(1, C64::from(rate.sqrt()));
        }
    }
    let rep = from_permutation(&PermutationRep { sigma: spec.sigma().clone(), d: 1 });
    SchurmannTriple::new(rep, CocycleTuple::new(xs).unwrap(), 1e-12).unwrap()
}

#[test]
fn exact_marginals_match_the_semigroup_for_all_small_permutations() {
    let rates = [0.5, 1.0, 1.5, 0.25, 2.0];
    let mut checked = 0;
    for n in 2..=6 {
        for sigma in Permutation::all(n) {
            let k = sigma.nontrivial_cycles().len();
            if k == 0 {
                continue;
            }
            let spec = PermProcessSpec::new(sigma, rates[..k].to_vec()).unwrap();
            let triple = matching_triple(&spec);
            for t in [0.3, 1.0, 2.5] {
                let exact = exact_marginals(&spec, t).unwrap();
                let semigroup = fundamental_semigroup(&triple, t, MAGIC_TOL).unwrap();
                assert!((&exact - &semigroup).abs().max() < 1e-10, "{} at t = {t}", spec.sigma());
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 1 + 5 + 23 + 119 + 719);
}

#[test]
fn exact_marginals_satisfy_chapman_kolmogorov() {
    let spec = PermProcessSpec::new(Permutation::parse_cycles("(1 2 3)(4 5 6)", 6).unwrap(), vec![0.7, 1.3]).unwrap();
    let a = exact_marginals(&spec, 0.4).unwrap();
    let b = exact_marginals(&spec, 0.9).unwrap();
    let ab = exact_marginals(&spec, 1.3).unwrap();
    assert!((a * b - ab).abs().max() < 1e-12);
}
