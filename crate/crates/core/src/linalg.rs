//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::ZERO_THRESHOLD;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    Svd::new(a).top()
}

/// max(‖P² − P‖, ‖P − P*‖) in operator norm.
pub fn projection_deviation(p: &CMat) -> f64 {
    if !p.is_square() {
        return f64::INFINITY;
    }
    let idem = op_norm(&(p * p - p));
    let herm = op_norm(&(p - p.adjoint()));
    idem.max(herm)
}

/// Orthogonal projection onto the line spanned by `v` (zero matrix for v = 0).
pub fn rank_one_projection(v: &CVec) -> CMat {
    let norm2 = v.norm_squared();
    if norm2 == 0.0 {
        return CMat::zeros(v.len(), v.len());
    }
    (v * v.adjoint()).unscale(norm2)
}

/// Full singular value decomposition a = U Σ V*, singular values descending.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn new(a: &CMat) -> Self {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Self { u: CMat::identity(m, m), s: Vec::new(), v: CMat::identity(n, n) };
        }
        let fa = faer::Mat::<C64>::from_fn(m, n, |i, j| a[(i, j)]);
        let svd = fa.svd().expect("SVD converges for finite input");
        let (fu, fv, fs) = (svd.U(), svd.V(), svd.S().column_vector());
        Self {
            u: CMat::from_fn(m, m, |i, j| fu[(i, j)]),
            s: (0..m.min(n)).map(|k| fs[k].re).collect(),
            v: CMat::from_fn(n, n, |i, j| fv[(i, j)]),
        }
    }

    pub fn top(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rel` times the largest one; a
    /// matrix whose largest singular value is below `ZERO_THRESHOLD` has rank 0.
    pub fn rank(&self, rel: f64) -> usize {
        let top = self.top();
        if top <= ZERO_THRESHOLD {
            return 0;
        }
        self.s.iter().filter(|&&s| s > rel * top).count()
    }

    /// Minimum-norm least-squares solution, dropping singular values below `rel · top`.
    pub fn solve(&self, b: &CVec, rel: f64) -> CVec {
        let r = self.rank(rel);
        let mut x = CVec::zeros(self.v.nrows());
        for k in 0..r {
            let coeff = self.u.column(k).dotc(b) / self.s[k];
            x += self.v.column(k) * coeff;
        }
        x
    }
}

/// Number of singular values above `rel` times the largest one.
pub fn rank(a: &CMat, rel: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    Svd::new(a).rank(rel)
}

/// Orthonormal basis (as columns) of the kernel of `a`.
pub fn null_space(a: &CMat, rel: f64) -> CMat {
    let cols = a.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return CMat::identity(cols, cols);
    }
    let svd = Svd::new(a);
    let r = svd.rank(rel);
    svd.v.columns(r, cols - r).into_owned()
}

/// Orthonormal basis (as columns) of the range of `a`.
pub fn column_space(a: &CMat, rel: f64) -> CMat {
    let rows = a.nrows();
    if a.ncols() == 0 || rows == 0 {
        return CMat::zeros(rows, 0);
    }
    let svd = Svd::new(a);
    let r = svd.rank(rel);
    svd.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the part of span(`z`) orthogonal to span(`b`).
/// Both inputs must have orthonormal columns.
pub fn relative_complement(z: &CMat, b: &CMat, rel: f64) -> CMat {
    let dim = z.nrows();
    if z.ncols() == 0 {
        return CMat::zeros(dim, 0);
    }
    let projected = if b.ncols() == 0 {
        z.clone()
    } else {
        z - b * (b.adjoint() * z)
    };
    let top = op_norm(&projected);
    // everything of z lies in b
    if top <= rel {
        return CMat::zeros(dim, 0);
    }
    column_space(&projected, rel)
}

/// Maximum distance of the columns of `a` from the span of orthonormal `basis`.
pub fn distance_from_span(a: &CMat, basis: &CMat) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    let residual = if basis.ncols() == 0 {
        a.clone()
    } else {
        a - basis * (basis.adjoint() * a)
    };
    residual
        .column_iter()
        .map(|col| col.norm())
        .fold(0.0, f64::max)
}

/// Deviation of the columns of `a` from orthonormality, ‖A*A − I‖.
pub fn orthonormality_defect(a: &CMat) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    op_norm(&(a.adjoint() * a - CMat::identity(a.ncols(), a.ncols())))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let sym = (a + a.adjoint()).unscale(2.0);
    sym.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn real_to_complex(a: &DMatrix<f64>) -> CMat {
    a.map(|x| C64::new(x, 0.0))
}

pub fn kron_identity(a: &CMat, d: usize) -> CMat {
    a.kronecker(&CMat::identity(d, d))
}

pub fn max_norm(vs: &[CVec]) -> f64 {
    vs.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let v = CVec::from_vec(vec![ONE, c(0.0, 1.0), ZERO]);
        let p = rank_one_projection(&v);
        let ns = null_space(&p, 1e-8);
        assert_eq!(ns.ncols(), 2);
        assert!((&p * &ns).norm() < 1e-12);
        assert!(orthonormality_defect(&ns) < 1e-12);
    }

    #[test]
    fn null_space_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let ns = null_space(&a, 1e-8);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn zero_matrix_has_full_kernel_and_empty_range() {
        let z = CMat::zeros(4, 3);
        assert_eq!(null_space(&z, 1e-8).ncols(), 3);
        assert_eq!(column_space(&z, 1e-8).ncols(), 0);
        assert_eq!(rank(&z, 1e-8), 0);
    }

    #[test]
    fn complement_drops_shared_directions() {
        let z = CMat::identity(3, 2);
        let b = CMat::identity(3, 1);
        let comp = relative_complement(&z, &b, 1e-8);
        assert_eq!(comp.ncols(), 1);
        assert!(comp[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn projection_deviation_flags_half_identity() {
        let half = CMat::identity(2, 2).scale(0.5);
        assert!((projection_deviation(&half) - 0.25).abs() < 1e-12);
        assert!(projection_deviation(&CMat::identity(2, 2)) < 1e-15);
    }
}
