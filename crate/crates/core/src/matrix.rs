//! Dense complex matrices and the bipartite reshuffles used throughout the crate.
//!
//! Everything here is deliberately small-scale: states, witnesses and maps in
//! this library live in dimensions of a few dozen at most, so storage is a flat
//! row-major `Vec` and products are the naive triple loop.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Absolute tolerance on `|m_ij - conj(m_ji)|` below which a matrix counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting count mismatches and NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Format(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(pos / cols, pos % cols));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Format("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Rank-one projector `|v><v|` (no normalization applied).
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate (in the computational basis).
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(C64::conj).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`; infinite for non-square matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "trace of {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `<u|self|v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    /// Entrywise map to the real part. Callers are expected to have checked the
    /// imaginary parts themselves.
    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|z| z.re).collect()).collect()
    }

    fn same_shape(&self, other: &Self, op: &str) {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in matrix {op}"
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.same_shape(rhs, "addition");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.same_shape(rhs, "subtraction");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Panics on inner-dimension mismatch; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("inner dimensions must agree")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Factorization `n = d1 * d2` of a bipartite Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub d1: usize,
    pub d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Self {
        Self { d1, d2 }
    }

    pub fn square(d: usize) -> Self {
        Self { d1: d, d2: d }
    }

    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    /// Guesses `d x d` from a square matrix of side `d^2`.
    pub fn infer_square(n: usize) -> Result<Self> {
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n || d == 0 {
            return Err(Error::DimensionMismatch(format!(
                "cannot split dimension {n} into d x d"
            )));
        }
        Ok(Self::square(d))
    }

    fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if self.d1 == 0 || self.d2 == 0 {
            return Err(Error::DimensionMismatch("subsystem dimensions must be positive".into()));
        }
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix does not act on {}x{}",
                m.rows(),
                m.cols(),
                self.d1,
                self.d2
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    First,
    Second,
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Transposition on one tensor factor. Pure index permutation, so it is an exact
/// involution.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: BipartiteDims,
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    dims.check(m)?;
    let d2 = dims.d2;
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        match subsystem {
            Subsystem::First => m[(j * d2 + k, i * d2 + l)],
            Subsystem::Second => m[(i * d2 + l, j * d2 + k)],
        }
    }))
}

/// Realigned matrix: block `(i, j)` of `m` (a `d2 x d2` block) flattened row-major
/// into row `i * d1 + j`. The result is `d1^2 x d2^2`.
pub fn realign(m: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check(m)?;
    let (d1, d2) = (dims.d1, dims.d2);
    Ok(ComplexMatrix::from_fn(d1 * d1, d2 * d2, |r, c| {
        let (i, j) = (r / d1, r % d1);
        let (k, l) = (c / d2, c % d2);
        m[(i * d2 + k, j * d2 + l)]
    }))
}

/// Trace norm of the realigned matrix. Values above one certify entanglement.
pub fn realignment_value(m: &ComplexMatrix, dims: BipartiteDims) -> Result<f64> {
    let r = realign(m, dims)?;
    Ok(eigen::singular_values(&r)?.iter().sum())
}

/// Serialized form: `{"rows": n, "cols": m, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        ComplexMatrix::from_vec(
            j.rows,
            j.cols,
            j.entries.into_iter().map(|[re, im]| C64::new(re, im)).collect(),
        )
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl ComplexMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite matrix always serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
