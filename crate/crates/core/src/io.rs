//! JSON schemas and a serializer that writes every float with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::cohomology::CocycleTuple;
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::magic::{from_hadamard, HadamardMatrix, MagicUnitary};
use crate::schurmann::SchurmannTriple;

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexJson>>;

pub fn complex_to_json(z: C64) -> ComplexJson {
    [z.re, z.im]
}

pub fn vector_to_json(v: &CVec) -> Vec<ComplexJson> {
    v.iter().map(|z| complex_to_json(*z)).collect()
}

pub fn vector_from_json(v: &[ComplexJson]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|z| C64::new(z[0], z[1])))
}

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect()).collect()
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<CMat> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::SizeMismatch("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| C64::new(m[i][j][0], m[i][j][1])))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MagicJson {
    pub n: usize,
    pub d: usize,
    /// entries[i][j] is the block P_{i+1, j+1}
    pub entries: Vec<Vec<MatrixJson>>,
}

impl MagicJson {
    pub fn from_magic(m: &MagicUnitary) -> Self {
        let n = m.n();
        let entries = (0..n).map(|i| (0..n).map(|j| matrix_to_json(m.block(i, j))).collect()).collect();
        Self { n, d: m.d(), entries }
    }

    pub fn to_magic(&self, tol: f64) -> Result<MagicUnitary> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::SizeMismatch(format!("entries must be a {0}×{0} array", self.n)));
        }
        let blocks = self.entries.iter().flatten().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        MagicUnitary::new(self.n, self.d, blocks, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HadamardJson {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: MatrixJson,
}

impl HadamardJson {
    pub fn from_hadamard(h: &HadamardMatrix) -> Self {
        Self { n: h.n(), h: matrix_to_json(h.matrix()) }
    }

    pub fn to_hadamard(&self, tol: f64) -> Result<HadamardMatrix> {
        let m = matrix_from_json(&self.h)?;
        if m.nrows() != self.n {
            return Err(Error::SizeMismatch(format!("H has {} rows, n = {}", m.nrows(), self.n)));
        }
        HadamardMatrix::new(m, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TripleJson {
    pub rep: MagicJson,
    pub xs: Vec<Vec<ComplexJson>>,
}

impl TripleJson {
    pub fn from_triple(t: &SchurmannTriple) -> Self {
        Self { rep: MagicJson::from_magic(t.rep()), xs: t.xs().xs().iter().map(vector_to_json).collect() }
    }

    pub fn to_triple(&self, tol: f64) -> Result<SchurmannTriple> {
        let rep = self.rep.to_magic(tol)?;
        let xs = CocycleTuple::new(self.xs.iter().map(|v| vector_from_json(v)).collect())?;
        SchurmannTriple::new(rep, xs, tol.max(1e-9))
    }
}

/// Any JSON document that names a representation: a magic unitary, a
/// Hadamard matrix, or an object carrying one under `rep`.
pub fn rep_from_value(value: &serde_json::Value, tol: f64) -> Result<MagicUnitary> {
    if let Some(inner) = value.get("rep") {
        return rep_from_value(inner, tol);
    }
    if value.get("entries").is_some() {
        let m: MagicJson = serde_json::from_value(value.clone())?;
        return m.to_magic(tol);
    }
    if value.get("H").is_some() {
        let h: HadamardJson = serde_json::from_value(value.clone())?;
        return Ok(from_hadamard(&h.to_hadamard(tol)?));
    }
    Err(Error::Parse("expected a magic unitary {n, d, entries}, a Hadamard matrix {n, H} or {rep, ...}".into()))
}

/// serde_json formatter printing floats as `{:.16e}` and non-finite values as null.
#[derive(Debug, Default, Clone, Copy)]
pub struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
