//! Dense linear algebra over `R` and `C` for the small dimensions used by
//! frames and effects.
//!
//! Real inputs run through the complex code path and carry a [`Field`] tag so
//! results can be demoted back to real entries.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

/// Tolerance used wherever a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Jacobi sweep cap for [`hermitian_eig`].
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds tolerance")]
    NotHermitian { asymmetry: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("matrix is singular or indefinite: smallest eigenvalue {min_eigenvalue:e}")]
    SingularOrIndefinite { min_eigenvalue: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("ragged matrix rows")]
    Ragged,
}

/// Scalar field of a vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[default]
    #[serde(rename = "C")]
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("R"),
            Field::Complex => f.write_str("C"),
        }
    }
}

/// A vector in `K^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<C64>,
    field: Field,
}

impl Vector {
    pub fn new(entries: Vec<C64>, field: Field) -> Self {
        let mut v = Vector { entries, field };
        if field == Field::Real {
            for z in &mut v.entries {
                z.im = 0.0;
            }
        }
        v
    }

    pub fn real(entries: &[f64]) -> Self {
        Vector {
            entries: entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
            field: Field::Real,
        }
    }

    pub fn complex(entries: Vec<C64>) -> Self {
        Vector {
            entries,
            field: Field::Complex,
        }
    }

    pub fn zeros(dim: usize, field: Field) -> Self {
        Vector {
            entries: vec![C64::new(0.0, 0.0); dim],
            field,
        }
    }

    /// Standard basis vector `e_k` (zero-based `k`).
    pub fn basis(dim: usize, k: usize, field: Field) -> Self {
        let mut v = Self::zeros(dim, field);
        v.entries[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    /// `<self, other> = sum_i self_i * conj(other_i)`, linear in the first slot.
    pub fn inner(&self, other: &Vector) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiply by a scalar. A non-real scalar promotes the field to `C`.
    pub fn scale(&self, alpha: C64) -> Vector {
        let field = if alpha.im == 0.0 { self.field } else { Field::Complex };
        Vector {
            entries: self.entries.iter().map(|z| z * alpha).collect(),
            field,
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Vector {
        self.scale(C64::new(alpha, 0.0))
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
            field: self.field.join(other.field),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add(&other.scale_real(-1.0))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Re-tag as real if every imaginary part is within `tol`.
    pub fn demote(mut self, tol: f64) -> Vector {
        if self.entries.iter().all(|z| z.im.abs() <= tol) {
            for z in &mut self.entries {
                z.im = 0.0;
            }
            self.field = Field::Real;
        }
        self
    }

    /// Same entries, tagged with `field` (imaginary parts dropped for `R`).
    pub fn with_field(self, field: Field) -> Vector {
        Vector::new(self.entries, field)
    }
}

impl Index<usize> for Vector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Ragged);
        }
        let data: Vec<C64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let rows = cols.first().map_or(0, Vector::dim);
        let mut m = Self::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = v[i];
            }
        }
        m
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::complex((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector, LinalgError> {
        if self.cols != x.dim() {
            return Err(LinalgError::DimMismatch {
                left: self.cols,
                right: x.dim(),
            });
        }
        let entries = (0..self.rows)
            .map(|i| self.row(i).iter().zip(x.entries()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Vector::complex(entries))
    }

    /// `<M x, x>`.
    pub fn quadratic_form(&self, x: &Vector) -> Result<C64, LinalgError> {
        Ok(self.apply(x)?.inner(x))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(C64, C64) -> C64) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, alpha: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Matrix {
        self.scale(C64::new(alpha, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M - M*|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows.min(self.cols) {
            for j in i..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian up to `tol` relative to the entry scale.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.asymmetry() <= tol * (1.0 + self.max_abs())
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Matrix {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&adj.data) {
            *a = (*a + b) * 0.5;
        }
        out
    }

    /// `(M - M*) / 2i`, so that `M = H + iK` with both parts Hermitian.
    pub fn skew_hermitian_part(&self) -> Matrix {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&adj.data) {
            *a = (*a - b) / C64::new(0.0, 2.0);
        }
        out
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    /// Zero out imaginary parts if all are within `tol`.
    pub fn demote(mut self, tol: f64) -> Matrix {
        if self.is_real(tol) {
            for z in &mut self.data {
                z.im = 0.0;
            }
        }
        self
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max entrywise distance to `other`.
    pub fn max_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: Matrix,
}

impl HermitianEig {
    pub fn eigenvector(&self, k: usize) -> Vector {
        self.eigenvectors.column(k)
    }

    /// `U f(Λ) U*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let uik = u[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.map_spectrum(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi
/// rotations.
///
/// The input is symmetrized as `(M + M*)/2` after the Hermitian check.
/// Iteration stops once the off-diagonal Frobenius norm drops below
/// `tol * ||M||_F`; one further sweep is then applied since convergence is
/// quadratic and it costs little at these sizes.
pub fn hermitian_eig(m: &Matrix, tol: f64) -> Result<HermitianEig, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let asym = m.asymmetry();
    if asym > tol * (1.0 + m.max_abs()) {
        return Err(LinalgError::NotHermitian { asymmetry: asym });
    }
    let n = m.rows();
    let real_input = m.is_real(0.0);
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut u = Matrix::identity(n);
    let scale = a.frobenius();
    let threshold = tol * scale;

    let mut polished = false;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || off == 0.0 {
            if polished || off == 0.0 {
                break;
            }
            polished = true;
        }
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let mut vectors = Matrix::zeros(n, n);
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    for (col, &k) in order.iter().enumerate() {
        // phase convention: first non-negligible component real positive
        let lead = (0..n)
            .map(|i| u[(i, k)])
            .find(|z| z.norm() > tol.max(1e-12))
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = lead.conj() / lead.norm();
        for i in 0..n {
            vectors[(i, col)] = u[(i, k)] * phase;
        }
    }
    if real_input {
        vectors = vectors.demote(tol);
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Zero `a[p][q]` with the unitary `V = D R`, where `D` removes the phase of
/// `a[p][q]` and `R` is the real Jacobi rotation. Updates `a <- V* a V` and
/// `u <- u V`.
fn rotate(a: &mut Matrix, u: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // V columns p and q.
    let vpp = C64::new(c, 0.0);
    let vpq = C64::new(s, 0.0);
    let vqp = -phase.conj() * s;
    let vqq = phase.conj() * c;

    let n = a.rows();
    // a <- a V
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * vpp + aiq * vqp;
        a[(i, q)] = aip * vpq + aiq * vqq;
    }
    // a <- V* a
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = vpp.conj() * apj + vqp.conj() * aqj;
        a[(q, j)] = vpq.conj() * apj + vqq.conj() * aqj;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for i in 0..n {
        let uip = u[(i, p)];
        let uiq = u[(i, q)];
        u[(i, p)] = uip * vpp + uiq * vqp;
        u[(i, q)] = uip * vpq + uiq * vqq;
    }
}

/// `M^{-1/2}` for positive definite `M`.
pub fn psd_inv_sqrt(m: &Matrix, tol: f64) -> Result<Matrix, LinalgError> {
    let eig = hermitian_eig(m, tol)?;
    if eig.min() < tol {
        return Err(LinalgError::SingularOrIndefinite {
            min_eigenvalue: eig.min(),
        });
    }
    let real = m.is_real(0.0);
    let r = eig.map_spectrum(|x| 1.0 / x.sqrt());
    Ok(if real { r.demote(tol) } else { r })
}

/// `M^{1/2}` for positive semidefinite `M`; eigenvalues in `(-tol, 0)` are clamped.
pub fn psd_sqrt(m: &Matrix, tol: f64) -> Result<Matrix, LinalgError> {
    let eig = hermitian_eig(m, tol)?;
    if eig.min() < -tol {
        return Err(LinalgError::SingularOrIndefinite {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

pub fn trace(m: &Matrix) -> Result<C64, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok((0..m.rows()).map(|i| m[(i, i)]).sum())
}

/// The ket-bra `|x><y|`: entry `(i, j)` is `x_i conj(y_j)`, and it maps `z` to `<z, y> x`.
pub fn outer(x: &Vector, y: &Vector) -> Result<Matrix, LinalgError> {
    if x.dim() != y.dim() {
        return Err(LinalgError::DimMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let n = x.dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = x[i] * y[j].conj();
        }
    }
    Ok(m)
}

// JSON: scalar = [re, im]; vector = [scalar...]; matrix = [[scalar...]...].
// Plain numbers are accepted on input as real scalars.

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ScalarRepr> for C64 {
    fn from(s: ScalarRepr) -> C64 {
        match s {
            ScalarRepr::Real(x) => C64::new(x, 0.0),
            ScalarRepr::Pair([re, im]) => C64::new(re, im),
        }
    }
}

/// Serde adapter for a single complex scalar as `[re, im]`.
pub mod scalar_serde {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let z: C64 = ScalarRepr::deserialize(d)?.into();
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(de::Error::custom("non-finite scalar"));
        }
        Ok(z)
    }
}

struct ScalarSlice<'a>(&'a [C64]);

impl Serialize for ScalarSlice<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in self.0 {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

/// Serde adapter for `Vec<C64>` as an array of `[re, im]`.
pub mod scalars_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        ScalarSlice(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let raw: Vec<ScalarRepr> = Vec::deserialize(d)?;
        let v: Vec<C64> = raw.into_iter().map(C64::from).collect();
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(de::Error::custom("non-finite scalar"));
        }
        Ok(v)
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarSlice(&self.entries).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = scalars_serde::deserialize(d)?;
        Ok(Vector::complex(entries).demote(0.0))
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&ScalarSlice(self.row(i)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<Vec<ScalarRepr>> = Vec::deserialize(d)?;
        let rows = raw
            .into_iter()
            .map(|r| r.into_iter().map(C64::from).collect())
            .collect();
        Matrix::from_rows(rows).map_err(de::Error::custom)
    }
}
