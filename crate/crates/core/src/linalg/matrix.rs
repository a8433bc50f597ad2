//! Dense square complex matrices and complex vectors.
//!
//! Storage is row-major. Arithmetic operators on references panic on a
//! dimension mismatch; the `checked_*` methods report it as an error instead.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A dense `dim × dim` complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Literal", into = "Literal")]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// A complex column vector.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Literal", into = "Literal")]
pub struct CVector {
    data: Vec<Complex64>,
}

/// JSON literal shared by matrices and vectors:
/// `{"dim": n, "entries": [[re, im], ...]}` with matrix entries row-major.
#[derive(Serialize, Deserialize)]
struct Literal {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

fn check_finite(entries: &[[f64; 2]]) -> Result<()> {
    if entries.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(invalid("literal contains a non-finite entry"))
    }
}

impl TryFrom<Literal> for CMatrix {
    type Error = Error;

    fn try_from(lit: Literal) -> Result<Self> {
        if lit.dim == 0 {
            return Err(invalid("matrix literal has dim 0"));
        }
        if lit.entries.len() != lit.dim * lit.dim {
            return Err(invalid(format!(
                "matrix literal with dim {} needs {} entries, found {}",
                lit.dim,
                lit.dim * lit.dim,
                lit.entries.len()
            )));
        }
        check_finite(&lit.entries)?;
        Ok(Self {
            dim: lit.dim,
            data: lit.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        })
    }
}

impl From<CMatrix> for Literal {
    fn from(m: CMatrix) -> Self {
        Literal { dim: m.dim, entries: m.data.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<Literal> for CVector {
    type Error = Error;

    fn try_from(lit: Literal) -> Result<Self> {
        if lit.dim == 0 || lit.entries.len() != lit.dim {
            return Err(invalid(format!(
                "vector literal with dim {} has {} entries",
                lit.dim,
                lit.entries.len()
            )));
        }
        check_finite(&lit.entries)?;
        Ok(Self { data: lit.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect() })
    }
}

impl From<CVector> for Literal {
    fn from(v: CVector) -> Self {
        Literal { dim: v.data.len(), entries: v.data.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(invalid("matrix needs at least one row"));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        if !data.iter().all(|z| z.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        Ok(Self { dim, data })
    }

    /// Convenience constructor from real rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let diag: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diag(&diag)
    }

    /// The 1×1 matrix holding `z`.
    pub fn scalar(z: Complex64) -> Self {
        Self { dim: 1, data: vec![z] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * c).collect() }
    }

    fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: other.dim })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `A*A`, the square of the operator absolute value `|A|²`.
    pub fn gram(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                out.data[i * n + j] = acc;
                out.data[j * n + i] = acc.conj();
            }
            out.data[i * n + i].im = 0.0;
        }
        out
    }

    /// Hermitian part `(X + X*)/2`.
    pub fn real_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖H − H*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.frobenius_norm().max(1.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Sum of equally sized matrices; `None` for an empty slice.
    pub fn sum<'a>(mats: impl IntoIterator<Item = &'a CMatrix>) -> Option<CMatrix> {
        let mut it = mats.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| &acc + m))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.checked_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul<&CMatrix> for Complex64 {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        rhs.scale(self)
    }
}

impl Mul<&CMatrix> for f64 {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        rhs.scale_real(self)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(invalid("vector needs at least one entry"));
        }
        if !data.iter().all(|z| z.is_finite()) {
            return Err(invalid("vector entries must be finite"));
        }
        Ok(Self { data })
    }

    /// The `i`-th standard basis vector of length `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim];
        data[i] = Complex64::new(1.0, 0.0);
        Self { data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// `⟨self, other⟩ = Σ selfᵢ·conj(otherᵢ)`, linear in the first slot.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self { data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        Ok(Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        Ok(Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() })
        }
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        self.checked_add(rhs).expect("vector dimensions must agree")
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        self.checked_sub(rhs).expect("vector dimensions must agree")
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

/// The rank-one operator `x ⊗ y : z ↦ ⟨z, y⟩ x`, i.e. entry `(i, j) = xᵢ·conj(yⱼ)`.
pub fn rank_one(x: &CVector, y: &CVector) -> Result<CMatrix> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    Ok(CMatrix::from_fn(x.dim(), |i, j| x.data[i] * y.data[j].conj()))
}
