//! Python bindings for `qperm`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use qperm::cohomology::{self, CocycleTuple};
use qperm::config::{MAGIC_TOL, MAX_WORD_LEN, RANK_THRESHOLD, SERIES_ORDER, TERM_BUDGET};
use qperm::io::{rep_from_value, to_json_string, MagicJson};
use qperm::linalg::{CMat, CVec};
use qperm::wordalg::Word;

fn err(e: qperm::Error) -> PyErr {
    match e {
        qperm::Error::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_value<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

fn to_py_json<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &to_json_string(value).map_err(err)?)
}

fn matrix_rows(m: &CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<CMat> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(CMat::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

/// A magic unitary: an n×n array of d×d orthogonal projections.
#[pyclass(name = "MagicUnitary", module = "qperm_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyMagicUnitary {
    inner: qperm::magic::MagicUnitary,
}

#[pymethods]
impl PyMagicUnitary {
    /// `blocks[i][j]` is the d×d block P_{i+1, j+1}.
    #[new]
    #[pyo3(signature = (blocks, tol = MAGIC_TOL))]
    fn new(blocks: Vec<Vec<Vec<Vec<Complex64>>>>, tol: f64) -> PyResult<Self> {
        let n = blocks.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in blocks {
            if row.len() != n {
                return Err(PyValueError::new_err("blocks must form an n×n array"));
            }
            for b in row {
                entries.push(matrix_from_rows(b)?);
            }
        }
        let d = entries.first().map_or(0, |m| m.nrows());
        Ok(Self { inner: qperm::magic::MagicUnitary::new(n, d, entries, tol).map_err(err)? })
    }

    /// Parse {n, d, entries}, {n, H} or any object carrying one under "rep".
    #[staticmethod]
    #[pyo3(signature = (text, tol = MAGIC_TOL))]
    fn from_json(text: &str, tol: f64) -> PyResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner: rep_from_value(&value, tol).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json_string(&MagicJson::from_magic(&self.inner)).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    /// The block P_ij with 1-based indices.
    fn block(&self, i: usize, j: usize) -> PyResult<Vec<Vec<Complex64>>> {
        let n = self.inner.n();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(PyValueError::new_err(format!("indices must lie in 1..={n}")));
        }
        Ok(matrix_rows(self.inner.block(i - 1, j - 1)))
    }

    /// Largest violation of the magic-unitary relations.
    fn violation(&self) -> f64 {
        self.inner.validate(MAGIC_TOL).max_violation()
    }

    /// {zdim, bdim, h1dim}.
    #[pyo3(signature = (rank_threshold = RANK_THRESHOLD))]
    fn cohomology<'py>(&self, py: Python<'py>, rank_threshold: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py_json(py, &cohomology::summary(&self.inner, rank_threshold))
    }

    /// Orthonormal H₁ representatives as tuples (ξ_1, …, ξ_n).
    #[pyo3(signature = (rank_threshold = RANK_THRESHOLD))]
    fn h1_representatives(&self, rank_threshold: f64) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
        let basis = cohomology::h1_representatives(&self.inner, rank_threshold);
        (0..basis.dim())
            .map(|k| {
                let xs = CocycleTuple::from_stacked(&basis.vector(k), self.inner.n()).map_err(err)?;
                Ok(xs.xs().iter().map(|v| v.iter().copied().collect()).collect())
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("MagicUnitary(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

#[pyfunction]
fn fourier(n: usize) -> PyResult<PyMagicUnitary> {
    let h = qperm::magic::fourier(n).map_err(err)?;
    Ok(PyMagicUnitary { inner: qperm::magic::from_hadamard(&h) })
}

#[pyfunction]
fn f4_phi(phi: f64) -> PyResult<PyMagicUnitary> {
    let h = qperm::magic::f4_phi(phi).map_err(err)?;
    Ok(PyMagicUnitary { inner: qperm::magic::from_hadamard(&h) })
}

/// Permutation representation of σ given in cycle notation, with multiplicity d.
#[pyfunction]
#[pyo3(signature = (sigma, n = None, d = 1))]
fn permutation_rep(sigma: &str, n: Option<usize>, d: usize) -> PyResult<PyMagicUnitary> {
    let sigma = qperm::cli::parse_sigma(sigma, n).map_err(err)?;
    Ok(PyMagicUnitary { inner: qperm::magic::from_permutation(&qperm::magic::PermutationRep { sigma, d }) })
}

#[pyfunction]
#[pyo3(signature = (p, q, tol = MAGIC_TOL))]
fn two_block(p: Vec<Vec<Complex64>>, q: Vec<Vec<Complex64>>, tol: f64) -> PyResult<PyMagicUnitary> {
    let spec = qperm::magic::TwoBlockSpec::new(matrix_from_rows(p)?, matrix_from_rows(q)?, tol).map_err(err)?;
    Ok(PyMagicUnitary { inner: qperm::magic::two_block(&spec) })
}

/// A Schürmann triple (ρ, η, L) determined by a magic unitary and a cocycle tuple.
#[pyclass(name = "SchurmannTriple", module = "qperm_py")]
pub struct PySchurmannTriple {
    inner: qperm::schurmann::SchurmannTriple,
}

impl PySchurmannTriple {
    fn word(&self, w: &str) -> PyResult<Word> {
        Word::parse(w, self.inner.n()).map_err(err)
    }
}

#[pymethods]
impl PySchurmannTriple {
    #[new]
    #[pyo3(signature = (rep, xs, tol = MAGIC_TOL))]
    fn new(rep: &PyMagicUnitary, xs: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Self> {
        let xs = CocycleTuple::new(xs.into_iter().map(CVec::from_vec).collect()).map_err(err)?;
        let inner = qperm::schurmann::SchurmannTriple::new(rep.inner.clone(), xs, tol).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// η on a word such as "p(1,2) p(2,1)".
    fn eta(&self, word: &str) -> PyResult<Vec<Complex64>> {
        Ok(self.inner.eta_word(&self.word(word)?).map_err(err)?.iter().copied().collect())
    }

    /// The generating functional L on a word.
    fn generator(&self, word: &str) -> PyResult<Complex64> {
        self.inner.gen_word(&self.word(word)?).map_err(err)
    }

    /// Classification record {gaussian, poisson, symmetric, tracial, violations}.
    #[pyo3(signature = (max_len = MAX_WORD_LEN, tol = MAGIC_TOL, seed = 0))]
    fn classify<'py>(&self, py: Python<'py>, max_len: usize, tol: f64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let c = qperm::schurmann::classify(&self.inner, max_len, tol, seed).map_err(err)?;
        to_py_json(py, &c)
    }

    /// exp(tA) with A_ij = L(p_ij).
    fn transition_matrix(&self, t: f64) -> PyResult<Vec<Vec<f64>>> {
        let m = qperm::semigroup::fundamental_semigroup(&self.inner, t, MAGIC_TOL).map_err(err)?;
        Ok((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
    }

    /// ω_t(w) from the truncated convolution exponential.
    #[pyo3(signature = (t, word, order = SERIES_ORDER, budget = TERM_BUDGET))]
    fn state(&self, t: f64, word: &str, order: usize, budget: u128) -> PyResult<Complex64> {
        let w = self.word(word)?;
        Ok(qperm::semigroup::conv_exp(&self.inner, t, &w, order, budget).map_err(err)?.value)
    }

    fn __repr__(&self) -> String {
        format!("SchurmannTriple(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

/// d_s for s = 0..=s_max.
#[pyfunction]
fn dims(n: usize, s_max: usize) -> PyResult<Vec<u128>> {
    Ok(qperm::central::dims(n, s_max).map_err(err)?.dims)
}

/// L(u^{(s)}_{jj}) for drift `a` and atoms [(x, w), ...].
#[pyfunction]
#[pyo3(signature = (n, a, atoms, s))]
fn ad_invariant_value(n: usize, a: f64, atoms: Vec<(f64, f64)>, s: usize) -> PyResult<f64> {
    let spec = qperm::central::AdInvariantSpec::new(n, a, atoms).map_err(err)?;
    qperm::central::ad_invariant_value(&spec, s, 1, 1).map_err(err)
}

fn process(sigma: &str, rates: Vec<f64>, n: Option<usize>) -> PyResult<qperm::stochsim::PermProcessSpec> {
    let sigma = qperm::cli::parse_sigma(sigma, n).map_err(err)?;
    qperm::stochsim::PermProcessSpec::new(sigma, rates).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (sigma, rates, t, n = None))]
fn exact_marginals(sigma: &str, rates: Vec<f64>, t: f64, n: Option<usize>) -> PyResult<Vec<Vec<f64>>> {
    let m = qperm::stochsim::exact_marginals(&process(sigma, rates, n)?, t).map_err(err)?;
    Ok((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
}

/// Monte Carlo estimate {t, probs, stderr, samples, seed}.
#[pyfunction]
#[pyo3(signature = (sigma, rates, t, samples = 100_000, seed = 0, n = None))]
fn simulate<'py>(
    py: Python<'py>,
    sigma: &str,
    rates: Vec<f64>,
    t: f64,
    samples: u64,
    seed: u64,
    n: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = process(sigma, rates, n)?;
    let est = py.detach(|| qperm::stochsim::simulate_marginals(&spec, t, samples, seed)).map_err(err)?;
    to_py_json(py, &est)
}

#[pymodule]
fn qperm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMagicUnitary>()?;
    m.add_class::<PySchurmannTriple>()?;
    m.add_function(wrap_pyfunction!(fourier, m)?)?;
    m.add_function(wrap_pyfunction!(f4_phi, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_rep, m)?)?;
    m.add_function(wrap_pyfunction!(two_block, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(ad_invariant_value, m)?)?;
    m.add_function(wrap_pyfunction!(exact_marginals, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
