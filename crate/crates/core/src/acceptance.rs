//! The acceptance suite, shared by the `acceptance` test target and
//! `qperm selftest`.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::central::{character_value, chebyshev_u, dims, AdInvariantSpec, Polynomial};
use crate::cohomology::{
    coboundary_space, fourier_h1_formula, gaussian_cocycle_space, h1_dim, h1_representatives, perm_h1_formula,
    two_block_h1_formula, CocycleTuple,
};
use crate::config::{MAGIC_TOL, POISSON_REL_TOL, RANK_THRESHOLD, TERM_BUDGET};
use crate::linalg::{min_hermitian_eigenvalue, rank_one_projection, CMat, CVec, C64, ONE, ZERO};
use crate::magic::{f4_phi, fourier, from_hadamard, from_permutation, MagicUnitary, PermutationRep, TwoBlockSpec};
use crate::perm::Permutation;
use crate::random::{
    complex_gaussian, gaussian_vector, random_magic, random_magic_with_n, random_nontrivial_triple, random_projection,
    random_real_projection, random_unitary, triple_on,
};
use crate::schurmann::{two_block_symmetry, two_block_triple, SchurmannTriple};
use crate::semigroup::{conv_exp, fundamental_semigroup};
use crate::stochsim::{exact_marginals, simulate_marginals, PermProcessSpec};
use crate::wordalg::{defining_relations, reduced_words, LinComb, Word};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:02} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

fn timed<F: FnOnce() -> (bool, String)>(id: usize, name: &'static str, limit: Option<f64>, f: F) -> CriterionReport {
    let start = Instant::now();
    let (ok, mut detail) = f();
    let seconds = start.elapsed().as_secs_f64();
    let within = limit.is_none_or(|l| seconds < l);
    if !within {
        detail.push_str(&format!("; runtime limit {:.0} s exceeded", limit.unwrap_or(0.0)));
    }
    CriterionReport { id, name, passed: ok && within, detail, seconds }
}

/// Permutation cohomology against cyc(σ) − fix(σ) − 1.
pub fn criterion_01() -> CriterionReport {
    timed(1, "permutation cohomology oracle", Some(60.0), || {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut perms: Vec<Permutation> = (2..=5).flat_map(Permutation::all).collect();
        for _ in 0..200 {
            let n = rng.random_range(6..=8);
            perms.push(Permutation::random(n, &mut rng));
        }
        let mismatches: Vec<String> = perms
            .iter()
            .filter(|s| {
                let rep = from_permutation(&PermutationRep { sigma: (*s).clone(), d: 1 });
                h1_dim(&rep, RANK_THRESHOLD) != perm_h1_formula(s)
            })
            .map(|s| format!("{s} in S_{}", s.n()))
            .collect();
        (mismatches.is_empty(), format!("{} permutations, mismatches: {:?}", perms.len(), mismatches))
    })
}

/// Fourier cohomology against Σ (gcd(n, k) − 1).
pub fn criterion_02() -> CriterionReport {
    timed(2, "Fourier cohomology oracle", Some(30.0), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for n in 2..=10 {
            let got = h1_dim(&from_hadamard(&fourier(n).expect("n ≥ 1")), RANK_THRESHOLD);
            let want = fourier_h1_formula(n);
            let prime = (2..n).all(|k| n % k != 0);
            ok &= got == want && (!prime || got == 0) && (n != 4 || got == 1);
            parts.push(format!("n={n}:{got}/{want}"));
        }
        (ok, parts.join(" "))
    })
}

/// The jump of H₁ along F₄(φ).
pub fn criterion_03() -> CriterionReport {
    timed(3, "F4(phi) cohomology jump", Some(5.0), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (phi, want) in [(0.0, 1), (0.4, 1), (1.2, 1), (2.0, 1), (3.0, 1), (PI / 2.0, 3)] {
            let got = h1_dim(&from_hadamard(&f4_phi(phi).expect("φ in range")), RANK_THRESHOLD);
            ok &= got == want;
            parts.push(format!("φ={phi:.4}:{got}"));
        }
        (ok, parts.join(" "))
    })
}

/// Projections with a prescribed common kernel of dimension `common` and
/// otherwise random ranges inside its complement.
fn engineered_pair<R: Rng + ?Sized>(d: usize, common: usize, rng: &mut R) -> (CMat, CMat) {
    let u = random_unitary(d, rng);
    let rest = d - common;
    let frame = u.columns(common, rest).into_owned();
    let rp = rng.random_range(0..=rest);
    let rq = rng.random_range(0..=rest);
    let mut pick = |rank: usize| {
        if rest == 0 {
            return CMat::zeros(d, d);
        }
        let inner = random_projection(rest, rank, rng);
        &frame * inner * frame.adjoint()
    };
    let p = pick(rp);
    let q = pick(rq);
    (p, q)
}

/// H₁ of the two-block representation against rank(P⊥ ∧ Q⊥).
pub fn criterion_04() -> CriterionReport {
    timed(4, "two-block lattice formula", Some(30.0), || {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let mut mismatches = 0;
        let mut nontrivial = 0;
        for case in 0..100 {
            let d = rng.random_range(1..=6);
            let (p, q) = if case % 2 == 0 {
                (random_projection(d, rng.random_range(0..=d), &mut rng), random_projection(d, rng.random_range(0..=d), &mut rng))
            } else {
                let common = rng.random_range(1..=d);
                engineered_pair(d, common, &mut rng)
            };
            let spec = TwoBlockSpec::new(p, q, MAGIC_TOL).expect("projections");
            let formula = two_block_h1_formula(&spec, MAGIC_TOL, RANK_THRESHOLD).expect("valid spec");
            let solver = h1_dim(&crate::magic::two_block(&spec), RANK_THRESHOLD);
            mismatches += usize::from(formula != solver);
            nontrivial += usize::from(formula > 0);
        }
        (mismatches == 0 && nontrivial > 0, format!("100 pairs, {nontrivial} with non-trivial meet, {mismatches} mismatches"))
    })
}

fn random_lincomb<R: Rng + ?Sized>(n: usize, terms: usize, max_len: usize, rng: &mut R) -> LinComb {
    let mut x = LinComb::zero(n);
    for _ in 0..terms {
        let len = rng.random_range(0..=max_len);
        let w = LinComb::from_word(Word::random_raw(n, len, rng));
        x = x.add(&w.scale(complex_gaussian(rng))).expect("same n");
    }
    x
}

/// Relations, coboundary identity and conditional positivity on random triples.
pub fn criterion_05() -> CriterionReport {
    timed(5, "triple consistency", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(505);
        let (mut rel, mut cob, mut min_eig) = (0.0f64, 0.0f64, f64::INFINITY);
        for _ in 0..50 {
            let t = random_nontrivial_triple(4, 4, &mut rng);
            let n = t.n();
            for r in defining_relations(n) {
                rel = rel.max(t.eta(&r).expect("n").norm()).max(t.gen_functional(&r).expect("n").norm());
            }
            for _ in 0..500 {
                let a = Word::random_raw(n, rng.random_range(0..=3), &mut rng);
                let b = Word::random_raw(n, rng.random_range(0..=3), &mut rng);
                let lhs = t.gen_word(&a.adjoint().concat(&b).expect("n")).expect("n");
                let eta = t.eta_word(&a).expect("n").dotc(&t.eta_word(&b).expect("n"));
                let rhs = eta + t.gen_word(&b).expect("n") * a.counit() + t.gen_word(&a.adjoint()).expect("n") * b.counit();
                cob = cob.max((lhs - rhs).norm());
            }
            let family: Vec<LinComb> = (0..6).map(|_| random_lincomb(n, 2, 3, &mut rng).centered()).collect();
            let gram = CMat::from_fn(6, 6, |m, l| {
                let prod = family[m].adjoint().mul(&family[l]).expect("n");
                t.gen_functional(&prod).expect("n")
            });
            min_eig = min_eig.min(min_hermitian_eigenvalue(&gram));
        }
        let ok = rel <= 1e-8 && cob <= 1e-8 && min_eig >= -1e-7;
        (ok, format!("relations {rel:.2e}, coboundary {cob:.2e}, min Gram eigenvalue {min_eig:.2e}"))
    })
}

/// Truncated convolution series against the matrix exponential.
pub fn criterion_06() -> CriterionReport {
    timed(6, "series vs matrix exponential", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let t = triple_on(random_magic_with_n(4, 4, &mut rng), &mut rng);
            for time in [0.1, 0.5, 1.0] {
                let m = fundamental_semigroup(&t, time, MAGIC_TOL).expect("valid generator");
                for i in 1..=4 {
                    for j in 1..=4 {
                        let w = Word::generator(4, i, j).expect("in range");
                        let v = conv_exp(&t, time, &w, 25, TERM_BUDGET).expect("within budget");
                        worst = worst.max((v.value - C64::from(m[(i - 1, j - 1)])).norm());
                    }
                }
            }
        }
        (worst <= 1e-6, format!("max deviation {worst:.2e} over 20 triples"))
    })
}

/// No Gaussian parts: zero tuples give L ≡ 0 and the Gaussian subspace is trivial.
pub fn criterion_07() -> CriterionReport {
    timed(7, "no Gaussian generators", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(707);
        let mut worst_l = 0.0f64;
        let mut gaussian_dims = 0;
        let mut misclassified = 0;
        for _ in 0..50 {
            let rep = random_magic(4, 4, &mut rng);
            gaussian_dims += gaussian_cocycle_space(&rep, RANK_THRESHOLD).dim();
            let zero = SchurmannTriple::zero(rep.clone());
            misclassified += usize::from(!zero.is_gaussian(1e-12));
            for w in reduced_words(rep.n(), 4) {
                worst_l = worst_l.max(zero.gen_word(&w).expect("n").norm());
            }
            let t = triple_on(rep, &mut rng);
            if t.xs().max_norm() > 1e-6 {
                misclassified += usize::from(t.is_gaussian(1e-9));
            }
        }
        let ok = worst_l == 0.0 && gaussian_dims == 0 && misclassified == 0;
        (ok, format!("max |L| on zero tuples {worst_l:.1e}, total Gaussian dimension {gaussian_dims}, misclassified {misclassified}"))
    })
}

/// One random two-block instance satisfying Pξ = 0, Qζ = 0.
fn two_block_instance<R: Rng + ?Sized>(kind: usize, rng: &mut R) -> (TwoBlockSpec, CVec, CVec) {
    let d = rng.random_range(2..=6);
    let id = CMat::identity(d, d);
    let (p, q) = match kind {
        0 => (random_real_projection(d, rng.random_range(0..d), rng), random_real_projection(d, rng.random_range(0..d), rng)),
        2 => engineered_pair(d, rng.random_range(1..d), rng),
        _ => (random_projection(d, rng.random_range(0..d), rng), random_projection(d, rng.random_range(0..d), rng)),
    };
    let real = |v: CVec| v.map(|z| C64::new(z.re, 0.0));
    let mut xi = (&id - &p) * gaussian_vector(d, rng);
    let mut zeta = (&id - &q) * gaussian_vector(d, rng);
    match kind {
        0 => {
            xi = (&id - &p) * real(gaussian_vector(d, rng));
            zeta = (&id - &q) * real(gaussian_vector(d, rng));
        }
        1 => {
            if rng.random_bool(0.5) {
                xi = CVec::zeros(d);
            } else {
                zeta = CVec::zeros(d);
            }
        }
        2 => {
            let meet = crate::cohomology::projection_meet(&(&id - &p), &(&id - &q), MAGIC_TOL, RANK_THRESHOLD)
                .expect("projections");
            xi = &meet * gaussian_vector(d, rng);
            zeta = xi.clone();
        }
        4 => {
            // rotate ζ so that ⟨ζ, ξ⟩ is real and only higher powers can break symmetry
            let c = zeta.dotc(&xi);
            if c.norm() > 0.0 {
                zeta *= c / c.norm();
            }
        }
        _ => {}
    }
    (TwoBlockSpec::new(p, q, MAGIC_TOL).expect("projections"), xi, zeta)
}

/// The two-block symmetry criterion against the word sweep.
pub fn criterion_08() -> CriterionReport {
    timed(8, "two-block symmetry theorem", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let mut disagreements = Vec::new();
        let mut symmetric = 0;
        for case in 0..200 {
            let (spec, xi, zeta) = two_block_instance(case % 5, &mut rng);
            let criterion = two_block_symmetry(&spec, &xi, &zeta, 1e-9).expect("preconditions hold");
            let t = two_block_triple(&spec, &xi, &zeta, 1e-9).expect("valid cocycle");
            let words = t.is_symmetric_words(4, 1e-9, case as u64).expect("max_len ≥ 1");
            symmetric += usize::from(criterion.holds);
            if criterion.holds != words.holds {
                disagreements.push(format!("case {case}: theorem {} words {}", criterion.holds, words.holds));
            }
        }
        let e = |v: [f64; 3]| CVec::from_fn(3, |i, _| C64::from(v[i]));
        let p = rank_one_projection(&e([1.0, 0.0, 0.0])) + rank_one_projection(&e([0.0, 1.0, 0.0]));
        let q = rank_one_projection(&e([1.0, 1.0, 1.0]));
        let v = CVec::from_vec(vec![ONE, ZERO, C64::new(0.0, 1.0)]);
        let id = CMat::identity(3, 3);
        let (xi, zeta) = ((&id - &p) * &v, (&id - &q) * &v);
        let spec = TwoBlockSpec::new(p, q, MAGIC_TOL).expect("projections");
        let theorem = two_block_symmetry(&spec, &xi, &zeta, 1e-9).expect("preconditions hold").holds;
        let words = two_block_triple(&spec, &xi, &zeta, 1e-9)
            .and_then(|t| t.is_symmetric_words(4, 1e-9, 0))
            .map(|r| r.holds)
            .unwrap_or(true);
        let ok = disagreements.is_empty() && !theorem && !words;
        (
            ok,
            format!(
                "200 instances ({symmetric} symmetric), disagreements {:?}; counterexample theorem={theorem} words={words}",
                disagreements
            ),
        )
    })
}

/// Poisson certificates exist exactly on coboundary directions.
pub fn criterion_09() -> CriterionReport {
    timed(9, "Poisson type iff coboundary", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let mut reps: Vec<MagicUnitary> = (2..=5)
            .flat_map(Permutation::all)
            .map(|sigma| from_permutation(&PermutationRep { sigma, d: 1 }))
            .collect();
        reps.extend((2..=5).map(|n| from_hadamard(&fourier(n).expect("n ≥ 1"))));
        let (mut directions, mut wrong, mut worst) = (0, 0, 0.0f64);
        for rep in &reps {
            let b = coboundary_space(rep, RANK_THRESHOLD);
            let h = h1_representatives(rep, RANK_THRESHOLD);
            let sides = (0..b.dim()).map(|k| (b.vector(k), true)).chain((0..h.dim()).map(|k| (h.vector(k), false)));
            for (v, coboundary) in sides {
                directions += 1;
                let xs = CocycleTuple::from_stacked(&v, rep.n()).expect("stacked");
                let t = SchurmannTriple::new(rep.clone(), xs, 1e-8).expect("basis vectors are cocycles");
                let cert = t.poisson_certificate(POISSON_REL_TOL);
                if cert.is_some() != coboundary {
                    wrong += 1;
                    continue;
                }
                if let Some(cert) = cert {
                    for _ in 0..200 {
                        let w = Word::random_reduced(rep.n(), rng.random_range(1..=4), &mut rng);
                        let l = t.gen_word(&w).expect("n");
                        let pv = t.poisson_value(&cert, &w).expect("n");
                        worst = worst.max((l - pv).norm());
                    }
                }
            }
        }
        let ok = wrong == 0 && worst <= 1e-7;
        (ok, format!("{} representations, {directions} directions, {wrong} misclassified, max |L − ⟨v,(ρ−ε)v⟩| {worst:.2e}", reps.len()))
    })
}

/// Monte Carlo marginals against the exact formula, and the exact formula
/// against the matrix exponential of the matching triple.
pub fn criterion_10() -> CriterionReport {
    timed(10, "stochastic oracle", Some(60.0), || {
        let samples = 100_000u64;
        let mut worst_z = 0.0f64;
        let mut worst_exact = 0.0f64;
        let mut ok = true;
        for cycles in ["(1 2 3 4)", "(1 2)(3 4 5)"] {
            let n = if cycles == "(1 2 3 4)" { 4 } else { 5 };
            let sigma = Permutation::parse_cycles(cycles, n).expect("valid cycles");
            for lambda in [0.5, 1.0] {
                let rates = vec![lambda; sigma.nontrivial_cycles().len()];
                let spec = PermProcessSpec::new(sigma.clone(), rates).expect("rates match cycles");
                let xs: Vec<CVec> = (0..n)
                    .map(|i| CVec::from_element(1, C64::from(if sigma.apply(i) == i { 0.0 } else { lambda.sqrt() })))
                    .collect();
                let rep = from_permutation(&PermutationRep { sigma: sigma.clone(), d: 1 });
                let triple = SchurmannTriple::new(rep, CocycleTuple::new(xs).expect("equal sizes"), 1e-12)
                    .expect("constant along cycles");
                for t in [0.5, 1.0] {
                    let exact = exact_marginals(&spec, t).expect("t ≥ 0");
                    let semigroup = fundamental_semigroup(&triple, t, MAGIC_TOL).expect("valid generator");
                    worst_exact = worst_exact.max((&exact - &semigroup).abs().max());
                    let est = simulate_marginals(&spec, t, samples, 20_240_601).expect("valid input");
                    for i in 0..n {
                        for j in 0..n {
                            let p = exact[(i, j)];
                            let se = (p * (1.0 - p) / samples as f64).sqrt();
                            let diff = (est.prob(i, j) - p).abs();
                            if se == 0.0 {
                                ok &= diff < 1e-12;
                            } else {
                                worst_z = worst_z.max(diff / se);
                            }
                        }
                    }
                }
            }
        }
        ok &= worst_z <= 4.0 && worst_exact <= 1e-10;
        (ok, format!("max |z| {worst_z:.2}, exact vs semigroup {worst_exact:.2e}"))
    })
}

/// Dimensions, Hunt-form positivity and the character recursion.
pub fn criterion_11() -> CriterionReport {
    timed(11, "central formulas", None, || {
        let mut worst_dim = 0.0f64;
        for n in 4..=9 {
            let fd = dims(n, 8).expect("n ≥ 4");
            let root = (n as f64).sqrt();
            for (s, &d) in fd.dims.iter().enumerate() {
                worst_dim = worst_dim.max((d as f64 - chebyshev_u(2 * s, root)).abs() / d as f64);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1111);
        let mut min_value = f64::INFINITY;
        for _ in 0..100 {
            let n = rng.random_range(4..=9);
            let atoms = (0..rng.random_range(0..=4))
                .map(|_| (rng.random_range(0.0..n as f64), rng.random_range(0.01..2.0)))
                .collect();
            let spec = AdInvariantSpec::new(n, rng.random_range(0.0..2.0), atoms).expect("valid spec");
            for _ in 0..10 {
                // g = (x − n) h with h of degree ≤ 2, so g(n) = 0
                let h: Vec<C64> = (0..rng.random_range(1..=3)).map(|_| complex_gaussian(&mut rng)).collect();
                let mut g = vec![ZERO; h.len() + 1];
                for (k, c) in h.iter().enumerate() {
                    g[k + 1] += c;
                    g[k] -= c * n as f64;
                }
                min_value = min_value.min(spec.hunt_value(&Polynomial::abs_squared(&g)));
            }
        }
        let mut worst_rec = 0.0f64;
        for k in 0..10 {
            let x = 0.45 * k as f64 + 0.1;
            for s in 1..=8 {
                let lhs = character_value(1, x) * character_value(s, x);
                let rhs = character_value(s + 1, x) + character_value(s, x) + character_value(s - 1, x);
                worst_rec = worst_rec.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
            }
        }
        let ok = worst_dim <= 1e-9 && min_value >= -1e-9 && worst_rec <= 1e-9;
        (ok, format!("dimension deviation {worst_dim:.2e}, min Hunt value {min_value:.2e}, recursion deviation {worst_rec:.2e}"))
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_01(),
        criterion_02(),
        criterion_03(),
        criterion_04(),
        criterion_05(),
        criterion_06(),
        criterion_07(),
        criterion_08(),
        criterion_09(),
        criterion_10(),
        criterion_11(),
    ]
}
