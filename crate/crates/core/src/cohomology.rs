//! Cocycles, coboundaries and first cohomology of a magic unitary, with the
//! closed-form dimension formulas for the standard families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    column_space, distance_from_span, null_space, projection_deviation, relative_complement,
    CMat, CVec,
};
use crate::magic::{MagicUnitary, TwoBlockSpec};
use crate::perm::{gcd, Permutation};

/// Orthonormal columns spanning a subspace of the stacked space ℂ^{nd}.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    vectors: CMat,
}

impl SubspaceBasis {
    pub fn new(vectors: CMat) -> Self {
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vectors(&self) -> &CMat {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }

    /// Largest distance of the columns of `other` from this subspace.
    pub fn distance_of(&self, other: &CMat) -> f64 {
        distance_from_span(other, &self.vectors)
    }

    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        distance_from_span(&CMat::from_columns(std::slice::from_ref(v)), &self.vectors) <= tol
    }
}

/// The vectors ξ₁, …, ξ_n parametrising a cocycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleTuple {
    xs: Vec<CVec>,
}

impl CocycleTuple {
    pub fn new(xs: Vec<CVec>) -> Result<Self> {
        if let Some(first) = xs.first() {
            if xs.iter().any(|x| x.len() != first.len()) {
                return Err(Error::SizeMismatch("cocycle vectors differ in dimension".into()));
            }
        }
        Ok(Self { xs })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self { xs: vec![CVec::zeros(d); n] }
    }

    /// Split a stacked vector of length n·d.
    pub fn from_stacked(v: &CVec, n: usize) -> Result<Self> {
        if n == 0 || !v.len().is_multiple_of(n) {
            return Err(Error::SizeMismatch(format!("stacked length {} not divisible by n = {n}", v.len())));
        }
        let d = v.len() / n;
        Ok(Self { xs: (0..n).map(|i| v.rows(i * d, d).into_owned()).collect() })
    }

    pub fn stacked(&self) -> CVec {
        let d = self.d();
        CVec::from_fn(self.xs.len() * d, |r, _| self.xs[r / d][r % d])
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn d(&self) -> usize {
        self.xs.first().map_or(0, |x| x.len())
    }

    pub fn xs(&self) -> &[CVec] {
        &self.xs
    }

    pub fn max_norm(&self) -> f64 {
        self.xs.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_norm() <= tol
    }

    /// Worst violation of P_ii ξ_i = 0 and P_ij ξ_i = P_ij ξ_j.
    pub fn residual(&self, rep: &MagicUnitary) -> Result<f64> {
        check_shape(rep, self)?;
        let n = rep.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let p = rep.block(i, j);
                let r = if i == j { p * &self.xs[i] } else { p * (&self.xs[i] - &self.xs[j]) };
                worst = worst.max(r.norm());
            }
        }
        Ok(worst)
    }
}

fn check_shape(rep: &MagicUnitary, xs: &CocycleTuple) -> Result<()> {
    if xs.n() != rep.n() || xs.d() != rep.d() {
        return Err(Error::SizeMismatch(format!(
            "tuple of {}×{} for a representation with n = {}, d = {}",
            xs.n(),
            xs.d(),
            rep.n(),
            rep.d()
        )));
    }
    Ok(())
}

/// Stacked constraint operator whose kernel is Z₁; zero blocks contribute no rows.
pub fn constraint_operator(rep: &MagicUnitary) -> CMat {
    let (n, d) = (rep.n(), rep.d());
    let active: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| rep.block(i, j).iter().any(|z| z.norm() > 0.0))
        .collect();
    let mut c = CMat::zeros(active.len() * d, n * d);
    for (r, &(i, j)) in active.iter().enumerate() {
        let p = rep.block(i, j);
        c.view_mut((r * d, i * d), (d, d)).copy_from(p);
        if i != j {
            c.view_mut((r * d, j * d), (d, d)).copy_from(&(-p));
        }
    }
    c
}

pub fn cocycle_space(rep: &MagicUnitary, rank_threshold: f64) -> SubspaceBasis {
    let (n, d) = (rep.n(), rep.d());
    let c = constraint_operator(rep);
    if c.nrows() == 0 {
        return SubspaceBasis::new(CMat::identity(n * d, n * d));
    }
    SubspaceBasis::new(null_space(&c, rank_threshold))
}

/// The linear map v ↦ ((P_ii − I)v)_i from ℂ^d into the stacked space.
pub fn coboundary_map(rep: &MagicUnitary) -> CMat {
    let (n, d) = (rep.n(), rep.d());
    let id = CMat::identity(d, d);
    let mut m = CMat::zeros(n * d, d);
    for i in 0..n {
        m.view_mut((i * d, 0), (d, d)).copy_from(&(rep.block(i, i) - &id));
    }
    m
}

pub fn coboundary_space(rep: &MagicUnitary, rank_threshold: f64) -> SubspaceBasis {
    SubspaceBasis::new(column_space(&coboundary_map(rep), rank_threshold))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub zdim: usize,
    pub bdim: usize,
    pub h1dim: usize,
}

pub fn summary(rep: &MagicUnitary, rank_threshold: f64) -> CohomologySummary {
    let zdim = cocycle_space(rep, rank_threshold).dim();
    let bdim = coboundary_space(rep, rank_threshold).dim();
    CohomologySummary { zdim, bdim, h1dim: zdim.saturating_sub(bdim) }
}

pub fn h1_dim(rep: &MagicUnitary, rank_threshold: f64) -> usize {
    summary(rep, rank_threshold).h1dim
}

/// Orthonormal complement of B₁ inside Z₁.
pub fn h1_representatives(rep: &MagicUnitary, rank_threshold: f64) -> SubspaceBasis {
    let z = cocycle_space(rep, rank_threshold);
    let b = coboundary_space(rep, rank_threshold);
    SubspaceBasis::new(relative_complement(z.vectors(), b.vectors(), rank_threshold))
}

/// The linear map from stacked tuples to ξ_kl (0-based k, l).
fn xi_map(rep: &MagicUnitary, k: usize, l: usize) -> CMat {
    let (n, d) = (rep.n(), rep.d());
    let mut e = CMat::zeros(d, n * d);
    if k == l {
        e.view_mut((0, k * d), (d, d)).fill_with_identity();
    } else {
        e.view_mut((0, k * d), (d, d)).copy_from(&(-rep.block(k, l)));
    }
    e
}

/// Tuples whose cocycle kills every product of two elements of ker ε:
/// the cocycle constraints plus (P_ij − δ_ij) ξ_kl = 0 for all i, j, k, l.
pub fn gaussian_cocycle_space(rep: &MagicUnitary, rank_threshold: f64) -> SubspaceBasis {
    let (n, d) = (rep.n(), rep.d());
    let base = constraint_operator(rep);
    let id = CMat::identity(d, d);
    let maps: Vec<CMat> = (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).map(|(k, l)| xi_map(rep, k, l)).collect();
    let mut rows: Vec<CMat> = vec![base];
    for i in 0..n {
        for j in 0..n {
            let shifted = if i == j { rep.block(i, j) - &id } else { rep.block(i, j).clone() };
            for e in &maps {
                rows.push(&shifted * e);
            }
        }
    }
    let total: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut stacked = CMat::zeros(total, n * d);
    let mut offset = 0;
    for r in rows {
        stacked.view_mut((offset, 0), (r.nrows(), n * d)).copy_from(&r);
        offset += r.nrows();
    }
    SubspaceBasis::new(null_space(&stacked, rank_threshold))
}

/// cyc(σ) − fix(σ) − 1 with fixed points counted as cycles; 0 for the identity.
pub fn perm_h1_formula(sigma: &Permutation) -> usize {
    if sigma.is_identity() {
        return 0;
    }
    sigma.cycle_count() - sigma.fixed_point_count() - 1
}

/// Σ_{k=1}^{n−1} (gcd(n, k) − 1).
pub fn fourier_h1_formula(n: usize) -> usize {
    (1..n).map(|k| gcd(n as u64, k as u64) as usize - 1).sum()
}

/// Projection onto range(P) ∩ range(Q), via the kernel of (I − P) + (I − Q).
pub fn projection_meet(p: &CMat, q: &CMat, tol: f64, rank_threshold: f64) -> Result<CMat> {
    let basis = meet_basis(p, q, tol, rank_threshold)?;
    Ok(&basis * basis.adjoint())
}

fn meet_basis(p: &CMat, q: &CMat, tol: f64, rank_threshold: f64) -> Result<CMat> {
    if !p.is_square() || p.shape() != q.shape() {
        return Err(Error::SizeMismatch("projections must be square of equal size".into()));
    }
    for (what, m) in [("P", p), ("Q", q)] {
        let deviation = projection_deviation(m);
        if deviation > tol {
            return Err(Error::NotProjection { what: what.into(), deviation });
        }
    }
    let d = p.nrows();
    let id = CMat::identity(d, d);
    let sum = (&id - p) + (&id - q);
    // an all-zero sum means P = Q = I
    if sum.iter().all(|z| z.norm() == 0.0) {
        return Ok(id);
    }
    Ok(null_space(&sum, rank_threshold))
}

/// rank(P⊥ ∧ Q⊥).
pub fn two_block_h1_formula(spec: &TwoBlockSpec, tol: f64, rank_threshold: f64) -> Result<usize> {
    let d = spec.d();
    let id = CMat::identity(d, d);
    Ok(meet_basis(&(&id - spec.p()), &(&id - spec.q()), tol, rank_threshold)?.ncols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{MAGIC_TOL, RANK_THRESHOLD};
    use crate::linalg::{rank, rank_one_projection, C64, ONE, ZERO};
    use crate::magic::{counit_rep, f4_phi, fourier, from_hadamard, from_permutation, two_block, PermutationRep};
    use std::f64::consts::PI;

    const R: f64 = RANK_THRESHOLD;

    fn perm_rep(cycles: &str, n: usize, d: usize) -> MagicUnitary {
        from_permutation(&PermutationRep { sigma: Permutation::parse_cycles(cycles, n).unwrap(), d })
    }

    #[test]
    fn counit_has_trivial_cohomology() {
        let s = summary(&counit_rep(4, 1), R);
        assert_eq!(s, CohomologySummary { zdim: 0, bdim: 0, h1dim: 0 });
    }

    #[test]
    fn full_cycle_has_constant_cocycles() {
        let rep = perm_rep("(1 2 3 4 5)", 5, 1);
        let z = cocycle_space(&rep, R);
        assert_eq!(z.dim(), 1);
        let v = z.vector(0);
        for i in 1..5 {
            assert!((v[i] - v[0]).norm() < 1e-12);
        }
        assert_eq!(coboundary_space(&rep, R).dim(), 1);
        assert_eq!(h1_dim(&rep, R), 0);
    }

    #[test]
    fn documented_h1_values() {
        assert_eq!(h1_dim(&perm_rep("(1 2)(3 4)", 4, 1), R), 1);
        assert_eq!(h1_dim(&from_hadamard(&fourier(4).unwrap()), R), 1);
        assert_eq!(h1_dim(&from_hadamard(&f4_phi(PI / 2.0).unwrap()), R), 3);
    }

    #[test]
    fn perm_formula_examples() {
        let p = |s: &str, n| Permutation::parse_cycles(s, n).unwrap();
        assert_eq!(perm_h1_formula(&p("(1 2)(3 4)", 5)), 1);
        assert_eq!(perm_h1_formula(&p("(1 2 3 4 5 6)", 6)), 0);
        assert_eq!(perm_h1_formula(&p("", 6)), 0);
    }

    #[test]
    fn fourier_formula_examples() {
        assert_eq!(fourier_h1_formula(4), 1);
        assert_eq!(fourier_h1_formula(5), 0);
        assert_eq!(fourier_h1_formula(6), 4);
        assert_eq!(h1_dim(&from_hadamard(&fourier(6).unwrap()), R), 4);
    }

    #[test]
    fn fourier_four_representative_is_h3_pattern() {
        let rep = from_hadamard(&fourier(4).unwrap());
        let reps = h1_representatives(&rep, R);
        assert_eq!(reps.dim(), 1);
        let tuple = CocycleTuple::from_stacked(&reps.vector(0), 4).unwrap();
        assert!(tuple.residual(&rep).unwrap() < 1e-10);
        assert!(!coboundary_space(&rep, R).contains(&reps.vector(0), 1e-8));
    }

    #[test]
    fn meet_examples() {
        let v = CVec::from_vec(vec![ONE, C64::new(0.0, 1.0), ZERO]);
        let w = CVec::from_vec(vec![ONE, C64::new(0.0, -1.0), ZERO]);
        let p = rank_one_projection(&v);
        let q = rank_one_projection(&w);
        assert!((projection_meet(&p, &p, MAGIC_TOL, R).unwrap() - &p).norm() < 1e-10);
        assert!(projection_meet(&p, &q, MAGIC_TOL, R).unwrap().norm() < 1e-10);
        let id = CMat::identity(3, 3);
        assert!((projection_meet(&id, &id, MAGIC_TOL, R).unwrap() - &id).norm() < 1e-12);
        assert!(projection_meet(&id.scale(0.5), &id, MAGIC_TOL, R).is_err());
    }

    #[test]
    fn two_block_cocycle_dimension_is_sum_of_kernels() {
        let d = 4;
        let v1 = CVec::from_fn(d, |i, _| C64::new(1.0 + i as f64, 0.5));
        let v2 = CVec::from_fn(d, |i, _| C64::new(0.3, i as f64 - 1.0));
        let p = rank_one_projection(&v1);
        let q = rank_one_projection(&v1) + rank_one_projection(&(&v2 - &v1 * (v1.dotc(&v2) / v1.norm_squared())));
        let spec = TwoBlockSpec::new(p, q, MAGIC_TOL).unwrap();
        let rep = two_block(&spec);
        let ker_p = d - rank(spec.p(), R);
        let ker_q = d - rank(spec.q(), R);
        assert_eq!(cocycle_space(&rep, R).dim(), ker_p + ker_q);
        assert_eq!(h1_dim(&rep, R), two_block_h1_formula(&spec, MAGIC_TOL, R).unwrap());
        assert_eq!(h1_dim(&rep, R), 2);
    }

    #[test]
    fn gaussian_space_is_trivial() {
        for rep in [
            from_hadamard(&fourier(4).unwrap()),
            perm_rep("(1 2)(3 4)", 4, 2),
            from_hadamard(&f4_phi(PI / 2.0).unwrap()),
            counit_rep(3, 2),
        ] {
            assert_eq!(gaussian_cocycle_space(&rep, R).dim(), 0);
        }
    }

    #[test]
    fn tuple_shape_checks() {
        let rep = counit_rep(3, 2);
        assert!(CocycleTuple::zero(3, 1).residual(&rep).is_err());
        assert!(CocycleTuple::new(vec![CVec::zeros(2), CVec::zeros(3)]).is_err());
        assert!(CocycleTuple::from_stacked(&CVec::zeros(7), 3).is_err());
        let t = CocycleTuple::from_stacked(&CVec::from_fn(6, |i, _| C64::new(i as f64, 0.0)), 3).unwrap();
        assert_eq!(t.stacked(), CVec::from_fn(6, |i, _| C64::new(i as f64, 0.0)));
    }
}
