//! Random test objects: unitaries, projections, representations, cocycles.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::cohomology::{cocycle_space, CocycleTuple};
use crate::config::{MAGIC_TOL, RANK_THRESHOLD};
use crate::linalg::{CMat, CVec, C64};
use crate::magic::{f4_phi, fourier, from_hadamard, from_permutation, two_block, MagicUnitary, PermutationRep, TwoBlockSpec};
use crate::perm::Permutation;
use crate::schurmann::SchurmannTriple;

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    CVec::from_fn(d, |_, _| complex_gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary from the QR factorisation of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let qr = gaussian_matrix(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases so the distribution is Haar
    let phases = CMat::from_fn(d, d, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else if i == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// Uniformly random orthogonal projection of the given rank.
pub fn random_projection<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> CMat {
    let u = random_unitary(d, rng);
    let cols = u.columns(0, rank.min(d));
    cols * cols.adjoint()
}

/// Real orthogonal projection of the given rank.
pub fn random_real_projection<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| C64::new(rng.sample(StandardNormal), 0.0));
    let q = g.qr().q();
    let cols = q.columns(0, rank.min(d));
    let p = cols * cols.adjoint();
    p.map(|z| C64::new(z.re, 0.0))
}

pub fn random_two_block<R: Rng + ?Sized>(d: usize, rng: &mut R) -> TwoBlockSpec {
    let p = random_projection(d, rng.random_range(0..=d), rng);
    let q = random_projection(d, rng.random_range(0..=d), rng);
    TwoBlockSpec::new(p, q, MAGIC_TOL).expect("random projections are projections")
}

/// A random representation with 2 ≤ n ≤ max_n and d ≤ max_d; see [`random_magic_with_n`].
pub fn random_magic<R: Rng + ?Sized>(max_n: usize, max_d: usize, rng: &mut R) -> MagicUnitary {
    assert!(max_n >= 2 && max_d >= 1);
    let n = rng.random_range(2..=max_n);
    random_magic_with_n(n, max_d, rng)
}

/// A random representation of the given n with d ≤ max_d, drawn from the
/// permutation, Fourier, F₄(φ) and two-block families, direct sums of
/// permutation representations, and unitary conjugates of all of these.
pub fn random_magic_with_n<R: Rng + ?Sized>(n: usize, max_d: usize, rng: &mut R) -> MagicUnitary {
    assert!(n >= 1 && max_d >= 1);
    loop {
        let base = match rng.random_range(0..5) {
            0 => {
                let d = rng.random_range(1..=max_d.min(2));
                from_permutation(&PermutationRep { sigma: Permutation::random(n, rng), d })
            }
            1 if n <= max_d => from_hadamard(&fourier(n).expect("n ≥ 1")),
            2 if n == 4 && max_d >= 4 => from_hadamard(&f4_phi(rng.random_range(0.0..3.1)).expect("φ in range")),
            3 if n == 4 => two_block(&random_two_block(rng.random_range(1..=max_d), rng)),
            4 if max_d >= 2 => {
                let d1 = rng.random_range(1..max_d);
                let d2 = rng.random_range(1..=max_d - d1);
                let a = from_permutation(&PermutationRep { sigma: Permutation::random(n, rng), d: d1 });
                let b = from_permutation(&PermutationRep { sigma: Permutation::random(n, rng), d: d2 });
                a.direct_sum(&b).expect("same n")
            }
            _ => continue,
        };
        let u = random_unitary(base.d(), rng);
        return base.conjugate(&u).expect("matching dimension");
    }
}

/// Random element of Z₁(ρ): Gaussian coefficients on an orthonormal basis.
pub fn random_cocycle<R: Rng + ?Sized>(rep: &MagicUnitary, rng: &mut R) -> CocycleTuple {
    let z = cocycle_space(rep, RANK_THRESHOLD);
    let coeffs = gaussian_vector(z.dim(), rng);
    let stacked = if z.dim() == 0 { CVec::zeros(rep.n() * rep.d()) } else { z.vectors() * coeffs };
    CocycleTuple::from_stacked(&stacked, rep.n()).expect("stacked length is n·d")
}

pub fn random_triple<R: Rng + ?Sized>(max_n: usize, max_d: usize, rng: &mut R) -> SchurmannTriple {
    triple_on(random_magic(max_n, max_d, rng), rng)
}

/// A random cocycle on the given representation, packaged as a triple.
pub fn triple_on<R: Rng + ?Sized>(rep: MagicUnitary, rng: &mut R) -> SchurmannTriple {
    let xs = random_cocycle(&rep, rng);
    SchurmannTriple::new(rep, xs, 1e-8).expect("null-space vectors are cocycles")
}

/// A random triple with a non-zero cocycle, retrying until one is found.
pub fn random_nontrivial_triple<R: Rng + ?Sized>(max_n: usize, max_d: usize, rng: &mut R) -> SchurmannTriple {
    loop {
        let t = random_triple(max_n, max_d, rng);
        if t.xs().max_norm() > 1e-6 {
            return t;
        }
    }
}
