//! Convolution semigroups exp_⋆(tL): the matrix-exponential path on the
//! fundamental corepresentation, the truncated series on arbitrary words,
//! and the degree-two Haar symmetry check.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::SERIES_EARLY_EXIT;
use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};
use crate::schurmann::SchurmannTriple;
use crate::wordalg::{coproduct, LinComb, Word};

/// A functional defined on words, assumed well defined on Pol(S_n⁺).
pub trait WordFunctional {
    fn value(&self, w: &Word) -> C64;
}

pub struct Counit;

impl WordFunctional for Counit {
    fn value(&self, w: &Word) -> C64 {
        C64::from(w.counit())
    }
}

impl WordFunctional for SchurmannTriple {
    fn value(&self, w: &Word) -> C64 {
        self.gen_word(w).expect("word size matches triple")
    }
}

impl<F: Fn(&Word) -> C64> WordFunctional for F {
    fn value(&self, w: &Word) -> C64 {
        self(w)
    }
}

/// A_ij = L(p_ij); off-diagonal entries are non-negative and every row and
/// column sums to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    a: DMatrix<f64>,
}

impl GeneratorMatrix {
    pub fn from_triple(t: &SchurmannTriple, tol: f64) -> Result<Self> {
        Self::new(t.generator_values(), tol * (1.0 + t.xs().max_norm().powi(2)))
    }

    pub fn new(a: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::SizeMismatch("generator matrix must be square".into()));
        }
        let n = a.nrows();
        for i in 0..n {
            let row: f64 = a.row(i).sum();
            let col: f64 = a.column(i).sum();
            if row.abs() > tol || col.abs() > tol {
                return Err(Error::Precondition(format!("row/column {} of the generator does not sum to zero", i + 1)));
            }
            for j in 0..n {
                if i != j && a[(i, j)] < -tol {
                    return Err(Error::Precondition(format!("negative rate at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { a })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// exp(time · A), a Markov transition matrix.
    pub fn exp(&self, time: f64) -> DMatrix<f64> {
        (&self.a * time).exp()
    }
}

pub fn fundamental_semigroup(t: &SchurmannTriple, time: f64, tol: f64) -> Result<DMatrix<f64>> {
    if time < 0.0 {
        return Err(Error::Precondition("time must be non-negative".into()));
    }
    Ok(GeneratorMatrix::from_triple(t, tol)?.exp(time))
}

/// (f ⋆ g)(w) = Σ f(w₁) g(w₂) over the reduced coproduct Δ(w) = Σ w₁ ⊗ w₂.
pub fn convolve<F: WordFunctional + ?Sized, G: WordFunctional + ?Sized>(
    f: &F,
    g: &G,
    w: &Word,
    budget: u128,
) -> Result<C64> {
    let Some(w) = w.reduce() else { return Ok(ZERO) };
    let terms = coproduct(&w, 2, budget)?;
    Ok(terms.iter().map(|(legs, c)| c * f.value(&legs[0]) * g.value(&legs[1])).sum())
}

/// One term c · (u ⊗ v) of a reduced coproduct.
type SplitTerm = (Word, Word, C64);

/// Convolution powers L^{⋆k} with a per-instance memo keyed by
/// (k, reduced word). The cache is confined to one thread.
pub struct ConvolutionPowers<'a> {
    triple: &'a SchurmannTriple,
    budget: u128,
    coproducts: RefCell<HashMap<Word, Vec<SplitTerm>>>,
    powers: RefCell<HashMap<(usize, Word), C64>>,
}

impl<'a> ConvolutionPowers<'a> {
    pub fn new(triple: &'a SchurmannTriple, budget: u128) -> Self {
        Self { triple, budget, coproducts: RefCell::default(), powers: RefCell::default() }
    }

    fn split(&self, w: &Word) -> Result<Vec<(Word, Word, C64)>> {
        if let Some(hit) = self.coproducts.borrow().get(w) {
            return Ok(hit.clone());
        }
        let out: Vec<(Word, Word, C64)> = coproduct(w, 2, self.budget)?
            .into_iter()
            .map(|(mut legs, c)| {
                let right = legs.pop().expect("two legs");
                let left = legs.pop().expect("two legs");
                (left, right, c)
            })
            .collect();
        self.coproducts.borrow_mut().insert(w.clone(), out.clone());
        Ok(out)
    }

    /// L^{⋆k}(w), with L^{⋆0} = ε.
    pub fn power(&self, k: usize, w: &Word) -> Result<C64> {
        let Some(w) = w.reduce() else { return Ok(ZERO) };
        if k == 0 {
            return Ok(C64::from(w.counit()));
        }
        if w.is_empty() {
            return Ok(ZERO);
        }
        if let Some(hit) = self.powers.borrow().get(&(k, w.clone())) {
            return Ok(*hit);
        }
        let mut total = ZERO;
        for (left, right, c) in self.split(&w)? {
            let l = self.triple.gen_word(&left)?;
            if l == ZERO {
                continue;
            }
            total += c * l * self.power(k - 1, &right)?;
        }
        self.powers.borrow_mut().insert((k, w), total);
        Ok(total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: C64,
    /// Magnitude of the last term added; a heuristic error indicator.
    pub last_term: f64,
    pub terms: usize,
}

/// Σ_{k ≤ order} time^k / k! · L^{⋆k}(w). Summation stops early once
/// n·|w| + 1 consecutive terms fall below the early-exit threshold.
pub fn conv_exp(t: &SchurmannTriple, time: f64, w: &Word, order: usize, budget: u128) -> Result<SeriesValue> {
    let powers = ConvolutionPowers::new(t, budget);
    conv_exp_with(&powers, time, w, order)
}

pub fn conv_exp_with(powers: &ConvolutionPowers<'_>, time: f64, w: &Word, order: usize) -> Result<SeriesValue> {
    if time < 0.0 {
        return Err(Error::Precondition("time must be non-negative".into()));
    }
    let window = powers.triple.n() * w.len() + 1;
    let mut value = ZERO;
    let mut coeff = 1.0;
    let mut last_term = 0.0;
    let mut quiet = 0;
    let mut terms = 0;
    for k in 0..=order {
        if k > 0 {
            coeff *= time / k as f64;
        }
        let term = powers.power(k, w)? * coeff;
        value += term;
        last_term = term.norm();
        terms = k + 1;
        quiet = if last_term < SERIES_EARLY_EXIT { quiet + 1 } else { 0 };
        if quiet >= window {
            break;
        }
    }
    Ok(SeriesValue { value, last_term, terms })
}

pub fn conv_exp_lincomb(t: &SchurmannTriple, time: f64, x: &LinComb, order: usize, budget: u128) -> Result<C64> {
    if x.n() != t.n() {
        return Err(Error::MixedSize(t.n(), x.n()));
    }
    let powers = ConvolutionPowers::new(t, budget);
    let mut total = ZERO;
    for (w, c) in x.terms() {
        total += c * conv_exp_with(&powers, time, w, order)?.value;
    }
    Ok(total)
}

/// ω_t on a list of words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateTable {
    pub t: f64,
    pub order: usize,
    pub values: BTreeMap<String, SeriesValue>,
}

pub fn state_table(t: &SchurmannTriple, time: f64, words: &[Word], order: usize, budget: u128) -> Result<StateTable> {
    let powers = ConvolutionPowers::new(t, budget);
    let mut values = BTreeMap::new();
    for w in words {
        values.insert(w.to_string(), conv_exp_with(&powers, time, w, order)?);
    }
    Ok(StateTable { t: time, order, values })
}

/// Haar-state values on monomials of degree at most two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarDegree2 {
    n: usize,
}

impl HaarDegree2 {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition("degree-two Haar values need n ≥ 2".into()));
        }
        Ok(Self { n })
    }

    /// h(p_ij), 1-based.
    pub fn single(&self, _i: usize, _j: usize) -> f64 {
        1.0 / self.n as f64
    }

    /// h(p_ij p_kl), 1-based.
    pub fn pair(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n as f64;
        match (i == k, j == l) {
            (true, true) => 1.0 / n,
            (true, false) | (false, true) => 0.0,
            (false, false) => 1.0 / (n * (n - 1.0)),
        }
    }
}

/// Gram matrix h(b_a* b_b) on the spanning family {1, p_11, p_12, …, p_nn}.
pub fn haar_gram_degree2(n: usize) -> Result<DMatrix<f64>> {
    let h = HaarDegree2::new(n)?;
    let m = n * n + 1;
    let idx = |a: usize| ((a - 1) / n + 1, (a - 1) % n + 1);
    Ok(DMatrix::from_fn(m, m, |a, b| match (a, b) {
        (0, 0) => 1.0,
        (0, b) => {
            let (k, l) = idx(b);
            h.single(k, l)
        }
        (a, 0) => {
            let (i, j) = idx(a);
            h.single(i, j)
        }
        (a, b) => {
            let (i, j) = idx(a);
            let (k, l) = idx(b);
            h.pair(i, j, k, l)
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovSymmetry {
    pub holds: bool,
    pub worst: f64,
}

/// Self-adjointness of x ↦ (id ⊗ L)Δ(x) on span{1, p_ij} for the
/// degree-two Haar form: h(p_ij T(p_kl)) = h(T(p_ij) p_kl).
pub fn markov_symmetry_check(t: &SchurmannTriple, tol: f64) -> Result<MarkovSymmetry> {
    let n = t.n();
    let a = t.generator_values();
    let h = HaarDegree2::new(n)?;
    let mut worst: f64 = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    // T(p_kl) = Σ_m A_ml p_km
                    let lhs: f64 = (1..=n).map(|m| a[(m - 1, l - 1)] * h.pair(i, j, k, m)).sum();
                    let rhs: f64 = (1..=n).map(|m| a[(m - 1, j - 1)] * h.pair(i, m, k, l)).sum();
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    // pairs with the unit: h(T(p_ij)) = Σ_m A_mj / n vanishes by column sums
    for j in 1..=n {
        let col: f64 = (1..=n).map(|m| a[(m - 1, j - 1)]).sum();
        worst = worst.max(col.abs() / n as f64);
    }
    let scale = 1.0 + t.xs().max_norm().powi(2);
    Ok(MarkovSymmetry { holds: worst <= tol * scale, worst })
}
