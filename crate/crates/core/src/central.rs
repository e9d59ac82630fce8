//! Characters of S_n⁺ as polynomials in x = χ₁ + 1, fusion rules, and
//! ad-invariant generating functionals of Hunt type.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// U_s(x) by the three-term recursion.
pub fn chebyshev_u(s: usize, x: f64) -> f64 {
    chebyshev_u_with_derivative(s, x).0
}

/// (U_s(x), U_s'(x)).
pub fn chebyshev_u_with_derivative(s: usize, x: f64) -> (f64, f64) {
    let (mut u_prev, mut u) = (0.0, 1.0);
    let (mut du_prev, mut du) = (0.0, 0.0);
    for _ in 0..s {
        let u_next = x * u - u_prev;
        let du_next = u + x * du - du_prev;
        u_prev = u;
        u = u_next;
        du_prev = du;
        du = du_next;
    }
    (u, du)
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Precondition(format!("the character theory here needs n ≥ 4, got {n}")));
    }
    Ok(())
}

/// Dimensions d_0, …, d_smax of the irreducible representations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionData {
    pub n: usize,
    pub dims: Vec<u128>,
}

pub fn dims(n: usize, s_max: usize) -> Result<FusionData> {
    check_n(n)?;
    let d1 = (n - 1) as u128;
    let mut out = vec![1u128, d1];
    while out.len() <= s_max {
        let s = out.len() - 1;
        let next = d1
            .checked_mul(out[s])
            .and_then(|x| x.checked_sub(out[s] + out[s - 1]))
            .ok_or_else(|| Error::Precondition("dimension overflow".into()))?;
        out.push(next);
    }
    out.truncate(s_max + 1);
    Ok(FusionData { n, dims: out })
}

impl FusionData {
    /// max_s |d_s − U_{2s}(√n)| / d_s.
    pub fn chebyshev_deviation(&self) -> f64 {
        let root = (self.n as f64).sqrt();
        self.dims
            .iter()
            .enumerate()
            .map(|(s, &d)| ((d as f64) - chebyshev_u(2 * s, root)).abs() / d as f64)
            .fold(0.0, f64::max)
    }
}

/// Levels r + s, r + s − 1, …, |r − s| of v^{(r)} ⊗ v^{(s)}.
pub fn fusion_decompose(r: usize, s: usize) -> Vec<usize> {
    (r.abs_diff(s)..=r + s).rev().collect()
}

/// χ₁ χ_s as multiplicities per level.
pub fn character_product(s: usize) -> Result<BTreeMap<usize, usize>> {
    if s == 0 {
        return Err(Error::Precondition("character_product needs s ≥ 1".into()));
    }
    let mut out = BTreeMap::new();
    for level in fusion_decompose(1, s) {
        *out.entry(level).or_insert(0) += 1;
    }
    Ok(out)
}

/// χ_s(x) = U_{2s}(√x) for x ≥ 0.
pub fn character_value(s: usize, x: f64) -> f64 {
    character_polynomial(s).eval(x)
}

/// Real polynomial in x, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        Polynomial { coeffs }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial { coeffs: Vec::new() };
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Polynomial, k: usize| p.coeffs.get(k).copied().unwrap_or(0.0);
        Polynomial { coeffs: (0..len).map(|k| get(self, k) - get(other, k)).collect() }
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// |g(x)|² on the real line for a complex polynomial g.
    pub fn abs_squared(g: &[C64]) -> Polynomial {
        if g.is_empty() {
            return Polynomial { coeffs: Vec::new() };
        }
        let mut coeffs = vec![0.0; 2 * g.len() - 1];
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                coeffs[i + j] += (a * b.conj()).re;
            }
        }
        Polynomial { coeffs }
    }
}

/// χ_s as a polynomial in x: χ₀ = 1, χ₁ = x − 1, χ_{s+1} = (x − 2) χ_s − χ_{s−1}.
pub fn character_polynomial(s: usize) -> Polynomial {
    let x_minus_two = Polynomial::new(vec![-2.0, 1.0]);
    let mut prev = Polynomial::constant(1.0);
    if s == 0 {
        return prev;
    }
    let mut cur = Polynomial::new(vec![-1.0, 1.0]);
    for _ in 1..s {
        let next = x_minus_two.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// A finite atomic measure on [0, n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub atoms: Vec<(f64, f64)>,
}

/// Drift a ≥ 0 and jump measure ν of an ad-invariant functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdInvariantSpec {
    pub n: usize,
    pub a: f64,
    pub nu: DiscreteMeasure,
}

impl AdInvariantSpec {
    pub fn new(n: usize, a: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        let spec = Self { n, a, nu: DiscreteMeasure { atoms } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::Precondition(format!("drift a = {} must be finite and ≥ 0", self.a)));
        }
        let n = self.n as f64;
        for &(x, w) in &self.nu.atoms {
            if !(0.0..n).contains(&x) {
                return Err(Error::Precondition(format!("atom at {x} outside [0, {n})")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Precondition(format!("atom weight {w} must be finite and positive")));
            }
        }
        Ok(())
    }

    /// −a f′(n) + Σ w (f(x) − f(n)) / (n − x).
    pub fn hunt_value(&self, f: &Polynomial) -> f64 {
        let n = self.n as f64;
        let fn_ = f.eval(n);
        let jumps: f64 = self.nu.atoms.iter().map(|&(x, w)| w * (f.eval(x) - fn_) / (n - x)).sum();
        -self.a * f.derivative().eval(n) + jumps
    }
}

/// L(u^{(s)}_{jk}) for the ad-invariant functional given by `spec`.
pub fn ad_invariant_value(spec: &AdInvariantSpec, s: usize, j: usize, k: usize) -> Result<f64> {
    spec.validate()?;
    let d = *dims(spec.n, s)?.dims.last().expect("non-empty");
    if j == 0 || k == 0 || j as u128 > d || k as u128 > d {
        return Err(Error::IndexOutOfRange { row: j, col: k, n: d as usize });
    }
    if j != k {
        return Ok(0.0);
    }
    let n = spec.n as f64;
    let root = n.sqrt();
    let (u_n, du_n) = chebyshev_u_with_derivative(2 * s, root);
    let jumps: f64 = spec
        .nu
        .atoms
        .iter()
        .map(|&(x, w)| w * (chebyshev_u(2 * s, x.sqrt()) - u_n) / (n - x))
        .sum();
    Ok((-spec.a * du_n / (2.0 * root) + jumps) / u_n)
}

/// ad_h(u^{(s)}_{jk}) = (δ_jk / d_s) χ_s, as numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdHCoefficient {
    pub numerator: u128,
    pub denominator: u128,
}

impl AdHCoefficient {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

pub fn ad_h_coefficient(s: usize, j: usize, k: usize, n: usize) -> Result<AdHCoefficient> {
    let d = *dims(n, s)?.dims.last().expect("non-empty");
    if j == 0 || k == 0 || j as u128 > d || k as u128 > d {
        return Err(Error::IndexOutOfRange { row: j, col: k, n: d as usize });
    }
    Ok(AdHCoefficient { numerator: u128::from(j == k), denominator: d })
}
