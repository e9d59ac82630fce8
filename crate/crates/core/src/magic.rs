//! Magic unitaries: finite-dimensional representations of Pol(S_n⁺).

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::MAGIC_TOL;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, projection_deviation, rank_one_projection, CMat, CVec, C64, ONE};
use crate::perm::Permutation;
use crate::wordalg::{LinComb, Word};

/// An n×n array of d×d projections, stored row-major with 0-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicUnitary {
    n: usize,
    d: usize,
    entries: Vec<CMat>,
}

/// Worst violations of the magic-unitary relations, in operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagicReport {
    pub projection: f64,
    pub orthogonality: f64,
    pub row_sum: f64,
    pub col_sum: f64,
    pub tol: f64,
}

impl MagicReport {
    pub fn max_violation(&self) -> f64 {
        self.projection.max(self.orthogonality).max(self.row_sum).max(self.col_sum)
    }

    pub fn passed(&self) -> bool {
        self.max_violation() <= self.tol
    }
}

impl MagicUnitary {
    /// Shape-checked constructor; the relations are not checked here.
    pub fn from_blocks(n: usize, d: usize, entries: Vec<CMat>) -> Result<Self> {
        if n == 0 {
            return Err(Error::SizeMismatch("n must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::SizeMismatch(format!("expected {} blocks, got {}", n * n, entries.len())));
        }
        if let Some(bad) = entries.iter().find(|b| b.nrows() != d || b.ncols() != d) {
            return Err(Error::SizeMismatch(format!(
                "block of shape {}x{} in a d = {d} representation",
                bad.nrows(),
                bad.ncols()
            )));
        }
        Ok(Self { n, d, entries })
    }

    /// Shape- and relation-checked constructor.
    pub fn new(n: usize, d: usize, entries: Vec<CMat>, tol: f64) -> Result<Self> {
        let m = Self::from_blocks(n, d, entries)?;
        let report = m.validate(tol);
        if !report.passed() {
            return Err(Error::NotMagic { violation: report.max_violation(), tol });
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Block P_ij for 0-based i, j.
    pub fn block(&self, i: usize, j: usize) -> &CMat {
        &self.entries[i * self.n + j]
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.entries
    }

    pub fn validate(&self, tol: f64) -> MagicReport {
        let n = self.n;
        let id = CMat::identity(self.d, self.d);
        let mut report =
            MagicReport { projection: 0.0, orthogonality: 0.0, row_sum: 0.0, col_sum: 0.0, tol };
        for i in 0..n {
            let mut row = -id.clone();
            let mut col = -id.clone();
            for j in 0..n {
                report.projection = report.projection.max(projection_deviation(self.block(i, j)));
                row += self.block(i, j);
                col += self.block(j, i);
                for k in 0..n {
                    if k != j {
                        let same_row = op_norm(&(self.block(i, j) * self.block(i, k)));
                        let same_col = op_norm(&(self.block(j, i) * self.block(k, i)));
                        report.orthogonality = report.orthogonality.max(same_row).max(same_col);
                    }
                }
            }
            report.row_sum = report.row_sum.max(op_norm(&row));
            report.col_sum = report.col_sum.max(op_norm(&col));
        }
        report
    }

    /// ρ on a word: ordered product of blocks, identity on the unit.
    pub fn apply_word(&self, w: &Word) -> Result<CMat> {
        if w.n() != self.n {
            return Err(Error::MixedSize(self.n, w.n()));
        }
        let mut out = CMat::identity(self.d, self.d);
        for g in w.letters() {
            out *= self.block(g.row - 1, g.col - 1);
        }
        Ok(out)
    }

    pub fn apply(&self, x: &LinComb) -> Result<CMat> {
        if x.n() != self.n {
            return Err(Error::MixedSize(self.n, x.n()));
        }
        let mut out = CMat::zeros(self.d, self.d);
        for (w, c) in x.terms() {
            out += self.apply_word(w)?.scale_c(*c);
        }
        Ok(out)
    }

    /// Block-diagonal direct sum of two representations of the same n.
    pub fn direct_sum(&self, other: &MagicUnitary) -> Result<MagicUnitary> {
        if self.n != other.n {
            return Err(Error::MixedSize(self.n, other.n));
        }
        let d = self.d + other.d;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let mut m = CMat::zeros(d, d);
                m.view_mut((0, 0), (self.d, self.d)).copy_from(a);
                m.view_mut((self.d, self.d), (other.d, other.d)).copy_from(b);
                m
            })
            .collect();
        Ok(MagicUnitary { n: self.n, d, entries })
    }

    /// Conjugate every block by a unitary U: P ↦ U P U*.
    pub fn conjugate(&self, u: &CMat) -> Result<MagicUnitary> {
        if u.nrows() != self.d || u.ncols() != self.d {
            return Err(Error::SizeMismatch("conjugating unitary has wrong dimension".into()));
        }
        let ua = u.adjoint();
        let entries = self.entries.iter().map(|p| u * p * &ua).collect();
        Ok(MagicUnitary { n: self.n, d: self.d, entries })
    }
}

trait ScaleComplex {
    fn scale_c(self, c: C64) -> CMat;
}

impl ScaleComplex for CMat {
    fn scale_c(self, c: C64) -> CMat {
        self.map(|x| x * c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermutationRep {
    pub sigma: Permutation,
    pub d: usize,
}

/// P_ij = I_d when σ(i) = j, zero otherwise.
pub fn from_permutation(spec: &PermutationRep) -> MagicUnitary {
    let n = spec.sigma.n();
    let d = spec.d;
    let mut entries = vec![CMat::zeros(d, d); n * n];
    for i in 0..n {
        entries[i * n + spec.sigma.apply(i)] = CMat::identity(d, d);
    }
    MagicUnitary { n, d, entries }
}

/// The counit as a d-dimensional representation.
pub fn counit_rep(n: usize, d: usize) -> MagicUnitary {
    from_permutation(&PermutationRep { sigma: Permutation::identity(n), d })
}

/// A complex Hadamard matrix: unimodular entries and H H* = n I.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMatrix {
    h: CMat,
}

impl HadamardMatrix {
    pub fn new(h: CMat, tol: f64) -> Result<Self> {
        if !h.is_square() || h.nrows() == 0 {
            return Err(Error::SizeMismatch("Hadamard matrix must be square and non-empty".into()));
        }
        let deviation = hadamard_deviation(&h);
        if deviation > tol {
            return Err(Error::NotHadamard { deviation });
        }
        Ok(Self { h })
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.h
    }

    /// Row j (0-based) as a column vector.
    pub fn row(&self, j: usize) -> CVec {
        self.h.row(j).transpose()
    }
}

/// max(entry modulus error, ‖H H* − nI‖ / n).
pub fn hadamard_deviation(h: &CMat) -> f64 {
    let n = h.nrows();
    let modulus = h.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let gram = h * h.adjoint() - CMat::identity(n, n).scale(n as f64);
    modulus.max(op_norm(&gram) / n as f64)
}

/// (F_n)_lm = e^{2πi(l−1)(m−1)/n}.
pub fn fourier(n: usize) -> Result<HadamardMatrix> {
    if n == 0 {
        return Err(Error::Precondition("Fourier matrix needs n ≥ 1".into()));
    }
    let h = CMat::from_fn(n, n, |l, m| {
        // reduce the exponent first to keep the angle small
        let k = (l * m) % n;
        C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
    });
    HadamardMatrix::new(h, MAGIC_TOL)
}

/// The one-parameter family F₄(φ), φ ∈ [0, π).
pub fn f4_phi(phi: f64) -> Result<HadamardMatrix> {
    if !(0.0..PI).contains(&phi) {
        return Err(Error::Precondition(format!("phi = {phi} outside [0, π)")));
    }
    let e = C64::new(0.0, 1.0) * C64::from_polar(1.0, phi);
    let m = -ONE;
    let rows = [[ONE, ONE, ONE, ONE], [ONE, e, m, -e], [ONE, m, ONE, m], [ONE, -e, m, e]];
    let h = CMat::from_fn(4, 4, |i, j| rows[i][j]);
    HadamardMatrix::new(h, MAGIC_TOL)
}

/// P_jk = Proj(h_j / h_k), the rank-one projection onto the entrywise ratio of rows.
pub fn from_hadamard(hm: &HadamardMatrix) -> MagicUnitary {
    let n = hm.n();
    let h = hm.matrix();
    let mut entries = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let v = CVec::from_fn(n, |m, _| h[(j, m)] / h[(k, m)]);
            entries.push(rank_one_projection(&v));
        }
    }
    MagicUnitary { n, d: n, entries }
}

/// Result of dephasing: D₁ H D₂ with first row and column equal to one.
#[derive(Debug, Clone)]
pub struct Dephased {
    pub matrix: HadamardMatrix,
    pub left: Vec<C64>,
    pub right: Vec<C64>,
}

/// Divide row j by the phase of H[j,1], then column k by the resulting H[1,k].
pub fn dephase(hm: &HadamardMatrix) -> Dephased {
    let n = hm.n();
    let h = hm.matrix();
    let left: Vec<C64> = (0..n).map(|j| h[(j, 0)].norm() / h[(j, 0)]).collect();
    let mut rows = CMat::from_fn(n, n, |j, k| h[(j, k)] * left[j]);
    let right: Vec<C64> = (0..n).map(|k| ONE / rows[(0, k)]).collect();
    for k in 0..n {
        for j in 0..n {
            rows[(j, k)] *= right[k];
        }
    }
    Dephased { matrix: HadamardMatrix { h: rows }, left, right }
}

/// Two projections P, Q on the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBlockSpec {
    p: CMat,
    q: CMat,
}

impl TwoBlockSpec {
    pub fn new(p: CMat, q: CMat, tol: f64) -> Result<Self> {
        if !p.is_square() || p.shape() != q.shape() {
            return Err(Error::SizeMismatch("P and Q must be square of equal size".into()));
        }
        for (what, m) in [("P", &p), ("Q", &q)] {
            let deviation = projection_deviation(m);
            if deviation > tol {
                return Err(Error::NotProjection { what: what.into(), deviation });
            }
        }
        Ok(Self { p, q })
    }

    pub fn d(&self) -> usize {
        self.p.nrows()
    }

    pub fn p(&self) -> &CMat {
        &self.p
    }

    pub fn q(&self) -> &CMat {
        &self.q
    }
}

/// Blocks [[P, I−P, 0, 0], [I−P, P, 0, 0], [0, 0, Q, I−Q], [0, 0, I−Q, Q]].
pub fn two_block(spec: &TwoBlockSpec) -> MagicUnitary {
    let d = spec.d();
    let id = CMat::identity(d, d);
    let z = CMat::zeros(d, d);
    let (p, q) = (spec.p.clone(), spec.q.clone());
    let (pc, qc) = (&id - &p, &id - &q);
    let entries = vec![
        p.clone(), pc.clone(), z.clone(), z.clone(),
        pc, p, z.clone(), z.clone(),
        z.clone(), z.clone(), q.clone(), qc.clone(),
        z.clone(), z, qc, q,
    ];
    MagicUnitary { n: 4, d, entries }
}
