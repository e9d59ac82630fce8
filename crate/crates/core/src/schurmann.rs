//! Schürmann triples (ρ, η, L) on Pol(S_n⁺) built from a magic unitary and a
//! cocycle tuple, with the classification checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{coboundary_map, CocycleTuple};
use crate::error::{Error, Result};
use crate::linalg::{rank_one_projection, CMat, CVec, Svd, C64, ZERO};
use crate::magic::{fourier, from_hadamard, two_block, MagicUnitary, TwoBlockSpec};
use crate::wordalg::{reduced_word_count, reduced_words, Generator, LinComb, Word};

/// Reduced-word sweeps up to this many words are exhaustive.
pub const EXHAUSTIVE_WORDS: u128 = 20_000;
/// Word-pair sweeps up to this many pairs are exhaustive.
pub const EXHAUSTIVE_PAIRS: u128 = 100_000;
/// Sample size once a sweep is too large to enumerate.
pub const SAMPLED_WORDS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct SchurmannTriple {
    rep: MagicUnitary,
    xs: CocycleTuple,
    xi: Vec<CVec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonCertificate {
    pub v: CVec,
    pub residual: f64,
}

/// Outcome of a bounded word sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub holds: bool,
    pub worst: f64,
    pub worst_case: Option<String>,
    pub checked: usize,
    pub exhaustive: bool,
}

impl SchurmannTriple {
    /// Fails when the tuple violates the cocycle relations beyond
    /// `tol · (1 + max ‖ξ_i‖)`.
    pub fn new(rep: MagicUnitary, xs: CocycleTuple, tol: f64) -> Result<Self> {
        let residual = xs.residual(&rep)?;
        if residual > tol * (1.0 + xs.max_norm()) {
            return Err(Error::InvalidCocycle { residual });
        }
        let n = rep.n();
        let mut xi = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                xi.push(if i == j { xs.xs()[i].clone() } else { -(rep.block(i, j) * &xs.xs()[i]) });
            }
        }
        Ok(Self { rep, xs, xi })
    }

    pub fn zero(rep: MagicUnitary) -> Self {
        let xs = CocycleTuple::zero(rep.n(), rep.d());
        Self::new(rep, xs, 1.0).expect("zero tuple is a cocycle")
    }

    pub fn rep(&self) -> &MagicUnitary {
        &self.rep
    }

    pub fn xs(&self) -> &CocycleTuple {
        &self.xs
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn d(&self) -> usize {
        self.rep.d()
    }

    /// ξ_ij for 0-based i, j.
    pub fn xi(&self, i: usize, j: usize) -> &CVec {
        &self.xi[i * self.n() + j]
    }

    fn letter_xi(&self, g: &Generator) -> &CVec {
        self.xi(g.row - 1, g.col - 1)
    }

    fn letter_p(&self, g: &Generator) -> &CMat {
        self.rep.block(g.row - 1, g.col - 1)
    }

    /// L on a single generator: −‖ξ_i‖² on the diagonal, ‖ξ_ij‖² off it.
    pub fn letter_value(&self, g: &Generator) -> f64 {
        let sq = self.letter_xi(g).norm_squared();
        if g.is_diagonal() {
            -sq
        } else {
            sq
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.n() != self.n() {
            return Err(Error::MixedSize(self.n(), w.n()));
        }
        Ok(())
    }

    /// (η, ε, L) on a word, peeling letters off the left.
    fn eval_word(&self, w: &Word) -> (CVec, f64, C64) {
        let mut eta = CVec::zeros(self.d());
        let mut eps = 1.0;
        let mut l = ZERO;
        for g in w.letters().iter().rev() {
            let delta = if g.is_diagonal() { 1.0 } else { 0.0 };
            let xi = self.letter_xi(g);
            l = xi.dotc(&eta) + l * delta + C64::from(self.letter_value(g) * eps);
            eta = self.letter_p(g) * &eta + xi * C64::from(eps);
            eps *= delta;
        }
        (eta, eps, l)
    }

    pub fn eta_word(&self, w: &Word) -> Result<CVec> {
        self.check_word(w)?;
        Ok(self.eval_word(w).0)
    }

    pub fn gen_word(&self, w: &Word) -> Result<C64> {
        self.check_word(w)?;
        Ok(self.eval_word(w).2)
    }

    pub fn eta(&self, x: &LinComb) -> Result<CVec> {
        if x.n() != self.n() {
            return Err(Error::MixedSize(self.n(), x.n()));
        }
        let mut out = CVec::zeros(self.d());
        for (w, c) in x.terms() {
            out += self.eval_word(w).0 * *c;
        }
        Ok(out)
    }

    pub fn gen_functional(&self, x: &LinComb) -> Result<C64> {
        if x.n() != self.n() {
            return Err(Error::MixedSize(self.n(), x.n()));
        }
        Ok(x.evaluate(|w| self.eval_word(w).2))
    }

    /// L(uv) through the coboundary formula with the split after `u`.
    pub fn gen_split(&self, u: &Word, v: &Word) -> Result<C64> {
        self.check_word(u)?;
        self.check_word(v)?;
        let (eta_ua, _, _) = self.eval_word(&u.adjoint());
        let (eta_v, eps_v, l_v) = self.eval_word(v);
        let (_, eps_u, l_u) = self.eval_word(u);
        Ok(eta_ua.dotc(&eta_v) + l_v * eps_u + l_u * eps_v)
    }

    /// η vanishes on products of two elements of ker ε, i.e.
    /// (P_ij − δ_ij) ξ_kl = 0 for all i, j, k, l.
    pub fn is_gaussian(&self, tol: f64) -> bool {
        let n = self.n();
        let id = CMat::identity(self.d(), self.d());
        for i in 0..n {
            for j in 0..n {
                let a = if i == j { self.rep.block(i, j) - &id } else { self.rep.block(i, j).clone() };
                if self.xi.iter().any(|x| (&a * x).norm() > tol) {
                    return false;
                }
            }
        }
        true
    }

    /// Least-squares v with (P_ii − I) v = ξ_i; present when the residual is
    /// within `rel_tol · (1 + max ‖ξ_i‖)`.
    pub fn poisson_certificate(&self, rel_tol: f64) -> Option<PoissonCertificate> {
        let (n, d) = (self.n(), self.d());
        let a = coboundary_map(&self.rep);
        let b = self.xs.stacked();
        let v = if b.norm() == 0.0 {
            CVec::zeros(d)
        } else {
            Svd::new(&a).solve(&b, 1e-12)
        };
        let id = CMat::identity(d, d);
        let residual = (0..n)
            .map(|i| ((self.rep.block(i, i) - &id) * &v - &self.xs.xs()[i]).norm())
            .fold(0.0, f64::max);
        (residual <= rel_tol * (1.0 + self.xs.max_norm())).then_some(PoissonCertificate { v, residual })
    }

    /// ⟨v, (ρ(w) − ε(w)) v⟩, the Poisson-type value predicted by a certificate.
    pub fn poisson_value(&self, cert: &PoissonCertificate, w: &Word) -> Result<C64> {
        let rho = self.rep.apply_word(w)?;
        let shifted = rho - CMat::identity(self.d(), self.d()).scale(w.counit());
        Ok(cert.v.dotc(&(shifted * &cert.v)))
    }

    /// |L(S w) − L(w)| over reduced words of length ≤ max_len.
    pub fn is_symmetric_words(&self, max_len: usize, tol: f64, seed: u64) -> Result<SweepReport> {
        if max_len == 0 {
            return Err(Error::Precondition("max_len must be at least 1".into()));
        }
        let scale = 1.0 + self.xs.max_norm().powi(2);
        let words = sweep_words(self.n(), max_len, seed);
        let exhaustive = words.1;
        Ok(worst_over(&words.0, exhaustive, tol * scale, |w| {
            let l = self.eval_word(w).2;
            let ls = self.eval_word(&w.antipode()).2;
            ((l - ls).norm(), w.to_string())
        }))
    }

    /// L(uv) = L(vu) over word pairs with |u| + |v| ≤ max_len, together with
    /// ‖η(a)‖ = ‖η(a*)‖ on sampled a ∈ ker ε.
    pub fn is_tracial(&self, max_len: usize, tol: f64, seed: u64) -> Result<SweepReport> {
        if max_len < 2 {
            return Err(Error::Precondition("max_len must be at least 2".into()));
        }
        let n = self.n();
        let scale = 1.0 + self.xs.max_norm().powi(2);
        let total: u128 = (1..max_len)
            .map(|lu| (1..=max_len - lu).map(|lv| reduced_word_count(n, lu) * reduced_word_count(n, lv)).sum::<u128>())
            .sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(Word, Word)> = if total <= EXHAUSTIVE_PAIRS {
            let words = reduced_words(n, max_len - 1);
            let mut out = Vec::new();
            for u in &words {
                for v in &words {
                    if u.len() + v.len() <= max_len {
                        out.push((u.clone(), v.clone()));
                    }
                }
            }
            out
        } else {
            (0..SAMPLED_WORDS)
                .map(|_| {
                    let lu = rng.random_range(1..max_len);
                    let lv = rng.random_range(1..=max_len - lu);
                    (Word::random_reduced(n, lu, &mut rng), Word::random_reduced(n, lv, &mut rng))
                })
                .collect()
        };
        let exhaustive = total <= EXHAUSTIVE_PAIRS;
        let mut report = worst_over(&pairs, exhaustive, tol * scale, |(u, v)| {
            let uv = self.eval_word(&u.concat(v).expect("same n")).2;
            let vu = self.eval_word(&v.concat(u).expect("same n")).2;
            ((uv - vu).norm(), format!("{u} | {v}"))
        });
        for _ in 0..200 {
            let mut a = LinComb::zero(n);
            for _ in 0..3 {
                let len = rng.random_range(1..=max_len.min(3));
                let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a = a.add(&LinComb::from_word(Word::random_reduced(n, len, &mut rng)).scale(c))?;
            }
            let a = a.centered();
            let gap = (self.eta(&a)?.norm() - self.eta(&a.adjoint())?.norm()).abs();
            report.checked += 1;
            if gap > report.worst {
                report.worst = gap;
                report.worst_case = Some(format!("‖η(a)‖ vs ‖η(a*)‖ for a = {a}"));
            }
        }
        report.holds = report.worst <= tol * scale;
        Ok(report)
    }

    /// x ↦ ½ (L(x) + L(S x)).
    pub fn symmetrize(&self) -> Symmetrized<'_> {
        Symmetrized { triple: self }
    }

    /// A_ij = L(p_ij) as a real n×n matrix.
    pub fn generator_values(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.letter_value(&Generator::new(i + 1, j + 1)))
    }
}

/// Enumerate reduced words when there are few enough, otherwise sample.
fn sweep_words(n: usize, max_len: usize, seed: u64) -> (Vec<Word>, bool) {
    let total: u128 = (1..=max_len).map(|l| reduced_word_count(n, l)).sum();
    if total <= EXHAUSTIVE_WORDS {
        return (reduced_words(n, max_len), true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = (0..SAMPLED_WORDS)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            Word::random_reduced(n, len, &mut rng)
        })
        .collect();
    (words, false)
}

fn worst_over<T: Sync, F>(items: &[T], exhaustive: bool, tol: f64, f: F) -> SweepReport
where
    F: Fn(&T) -> (f64, String) + Sync,
{
    let worst = items
        .par_iter()
        .enumerate()
        .map(|(k, item)| (f(item).0, k))
        .reduce(|| (0.0, usize::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let worst_case = (worst.1 != usize::MAX && worst.0 > 0.0).then(|| f(&items[worst.1]).1);
    SweepReport { holds: worst.0 <= tol, worst: worst.0, worst_case, checked: items.len(), exhaustive }
}

/// The symmetrised generating functional of a triple.
pub struct Symmetrized<'a> {
    triple: &'a SchurmannTriple,
}

impl Symmetrized<'_> {
    pub fn value(&self, x: &LinComb) -> Result<C64> {
        let l = self.triple.gen_functional(x)?;
        let ls = self.triple.gen_functional(&x.antipode())?;
        Ok((l + ls) * 0.5)
    }

    pub fn value_word(&self, w: &Word) -> Result<C64> {
        self.value(&LinComb::from_word(w.clone()))
    }
}

/// Triple for the two-block representation with ξ₁ = ξ₂ = ξ, ξ₃ = ξ₄ = ζ.
pub fn two_block_triple(spec: &TwoBlockSpec, xi: &CVec, zeta: &CVec, tol: f64) -> Result<SchurmannTriple> {
    let xs = CocycleTuple::new(vec![xi.clone(), xi.clone(), zeta.clone(), zeta.clone()])?;
    SchurmannTriple::new(two_block(spec), xs, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoBlockSymmetry {
    pub holds: bool,
    /// max_k |Im ⟨ζ, (PQ)^k ξ⟩|
    pub worst: f64,
    pub worst_power: usize,
}

/// ⟨ζ, (PQ)^k ξ⟩ real for k = 0, …, d−1.
pub fn two_block_symmetry(spec: &TwoBlockSpec, xi: &CVec, zeta: &CVec, tol: f64) -> Result<TwoBlockSymmetry> {
    let d = spec.d();
    if xi.len() != d || zeta.len() != d {
        return Err(Error::SizeMismatch("ξ and ζ must live in the representation space".into()));
    }
    let pre = (spec.p() * xi).norm().max((spec.q() * zeta).norm());
    if pre > tol * (1.0 + xi.norm().max(zeta.norm())) {
        return Err(Error::Precondition(format!("need Pξ = 0 and Qζ = 0 (residual {pre:.3e})")));
    }
    let pq = spec.p() * spec.q();
    let scale = 1.0 + xi.norm() * zeta.norm();
    let mut power = xi.clone();
    let mut worst = 0.0;
    let mut worst_power = 0;
    for k in 0..d.max(1) {
        let im = zeta.dotc(&power).im.abs();
        if im > worst {
            worst = im;
            worst_power = k;
        }
        power = &pq * power;
    }
    Ok(TwoBlockSymmetry { holds: worst <= tol * scale, worst, worst_power })
}

/// ⟨ξ_i, P_m ξ_k⟩ = ⟨P_{2−m} ξ_k, ξ_i⟩ for all i, k, m (indices mod n), with
/// P_m the projection onto the m-th row of F_n.
pub fn fourier_symmetry(n: usize, xs: &CocycleTuple, tol: f64) -> Result<SweepReport> {
    let h = fourier(n)?;
    let rep = from_hadamard(&h);
    let residual = xs.residual(&rep)?;
    if residual > tol * (1.0 + xs.max_norm()) {
        return Err(Error::InvalidCocycle { residual });
    }
    let projections: Vec<CMat> = (0..n).map(|m| rank_one_projection(&h.row(m))).collect();
    let scale = 1.0 + xs.max_norm().powi(2);
    let mut worst = 0.0;
    let mut worst_case = None;
    let x = xs.xs();
    for i in 0..n {
        for k in 0..n {
            for m in 0..n {
                let lhs = x[i].dotc(&(&projections[m] * &x[k]));
                let rhs = (&projections[(n - m) % n] * &x[k]).dotc(&x[i]);
                let gap = (lhs - rhs).norm();
                if gap > worst {
                    worst = gap;
                    worst_case = Some(format!("i = {}, k = {}, m = {}", i + 1, k + 1, m + 1));
                }
            }
        }
    }
    Ok(SweepReport { holds: worst <= tol * scale, worst, worst_case, checked: n * n * n, exhaustive: true })
}

/// Everything the verifier reports about a triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub gaussian: bool,
    pub poisson: bool,
    pub symmetric: bool,
    pub tracial: bool,
    pub violations: Violations,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violations {
    pub cocycle_residual: f64,
    pub poisson_residual: Option<f64>,
    pub symmetry: SweepReport,
    pub traciality: SweepReport,
}

pub fn classify(t: &SchurmannTriple, max_len: usize, tol: f64, seed: u64) -> Result<Classification> {
    let cert = t.poisson_certificate(crate::config::POISSON_REL_TOL);
    let symmetry = t.is_symmetric_words(max_len, tol, seed)?;
    let traciality = t.is_tracial(max_len.max(2), tol, seed)?;
    Ok(Classification {
        gaussian: t.is_gaussian(tol),
        poisson: cert.is_some(),
        symmetric: symmetry.holds,
        tracial: traciality.holds,
        violations: Violations {
            cocycle_residual: t.xs().residual(t.rep())?,
            poisson_residual: cert.map(|c| c.residual),
            symmetry,
            traciality,
        },
    })
}
