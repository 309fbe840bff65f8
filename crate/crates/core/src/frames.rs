//! Finite frames: the data model, frame-operator analysis, the canonical
//! Parseval transform and a handful of explicit constructions.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, hermitian_eig, outer, psd_inv_sqrt, Field, LinalgError, Matrix, Vector, C64};
use crate::rng::{gaussian_vector, seeded};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("a frame needs at least one vector")]
    Empty,
    #[error("vector {index} has dimension {found}, expected {expected}")]
    DimMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("not a frame: lower frame bound {lower:e} is below tolerance")]
    NotAFrame { lower: f64 },
    #[error("vector {index} has norm {norm}, expected unit norm")]
    NotUnitNorm { index: usize, norm: f64 },
    #[error("need at least two vectors")]
    TooFewVectors,
    #[error("bad cardinality: N = {n}, d = {d}")]
    BadCardinality { n: usize, d: usize },
    #[error("bad selector: {0}")]
    BadSelector(String),
    #[error("basis is not orthonormal (Gram deviation {deviation:e})")]
    BasisNotOrthonormal { deviation: f64 },
    #[error("frame is not Parseval: bounds ({lower}, {upper})")]
    NotParseval { lower: f64, upper: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An ordered list of `N >= 1` vectors in `K^d`. Spanning is not required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct Frame {
    dim: usize,
    field: Field,
    vectors: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    dim: usize,
    #[serde(default)]
    field: Field,
    vectors: Vec<Vector>,
}

impl TryFrom<FrameRepr> for Frame {
    type Error = FrameError;
    fn try_from(r: FrameRepr) -> Result<Self, FrameError> {
        Frame::new(r.dim, r.field, r.vectors)
    }
}

impl From<Frame> for FrameRepr {
    fn from(f: Frame) -> Self {
        FrameRepr {
            dim: f.dim,
            field: f.field,
            vectors: f.vectors,
        }
    }
}

impl Frame {
    pub fn new(dim: usize, field: Field, vectors: Vec<Vector>) -> Result<Self, FrameError> {
        if vectors.is_empty() || dim == 0 {
            return Err(FrameError::Empty);
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(FrameError::DimMismatch {
                    index,
                    expected: dim,
                    found: v.dim(),
                });
            }
            if !v.is_finite() {
                return Err(FrameError::Linalg(LinalgError::NonFinite));
            }
        }
        let vectors = vectors.into_iter().map(|v| v.with_field(field)).collect();
        Ok(Frame { dim, field, vectors })
    }

    /// Builds a frame, inferring `dim` and tagging real when every vector is real.
    pub fn from_vectors(vectors: Vec<Vector>) -> Result<Self, FrameError> {
        let dim = vectors.first().map(Vector::dim).ok_or(FrameError::Empty)?;
        let field = vectors.iter().fold(Field::Real, |f, v| f.join(v.field()));
        Frame::new(dim, field, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> &Vector {
        &self.vectors[j]
    }

    /// `sum_j |<y, x_j>|^2`.
    pub fn analysis_energy(&self, y: &Vector) -> f64 {
        self.vectors.iter().map(|x| y.inner(x).norm_sqr()).sum()
    }

    pub fn gram(&self) -> Matrix {
        let n = self.len();
        let mut g = Matrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                g[(j, k)] = self.vectors[k].inner(&self.vectors[j]);
            }
        }
        g
    }
}

/// `S(x) = sum_j <x, x_j> x_j`, i.e. `sum_j x_j x_j*`.
pub fn frame_operator(frame: &Frame) -> Matrix {
    let d = frame.dim();
    let mut s = Matrix::zeros(d, d);
    for x in frame.vectors() {
        for i in 0..d {
            for j in 0..d {
                s[(i, j)] += x[i] * x[j].conj();
            }
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
/// A lower bound of zero means the vectors do not span.
pub fn frame_bounds(frame: &Frame) -> Result<FrameBounds, FrameError> {
    let eig = hermitian_eig(&frame_operator(frame), linalg::DEFAULT_TOL)?;
    Ok(FrameBounds {
        lower: eig.min().max(0.0),
        upper: eig.max().max(0.0),
    })
}

pub fn is_parseval(frame: &Frame, tol: f64) -> Result<bool, FrameError> {
    let b = frame_bounds(frame)?;
    Ok((b.lower - 1.0).abs() <= tol && (b.upper - 1.0).abs() <= tol)
}

/// Errors with [`FrameError::NotParseval`] unless both bounds are within `tol` of 1.
pub fn require_parseval(frame: &Frame, tol: f64) -> Result<(), FrameError> {
    let b = frame_bounds(frame)?;
    if (b.lower - 1.0).abs() <= tol && (b.upper - 1.0).abs() <= tol {
        Ok(())
    } else {
        Err(FrameError::NotParseval {
            lower: b.lower,
            upper: b.upper,
        })
    }
}

/// `{S^{-1/2} x_j}`, a Parseval frame with the same cardinality and order.
pub fn canonical_parseval(frame: &Frame, tol: f64) -> Result<Frame, FrameError> {
    let s = frame_operator(frame);
    let r = match psd_inv_sqrt(&s, tol) {
        Ok(r) => r,
        Err(LinalgError::SingularOrIndefinite { min_eigenvalue }) => {
            return Err(FrameError::NotAFrame {
                lower: min_eigenvalue.max(0.0),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let vectors = frame
        .vectors()
        .iter()
        .map(|x| r.apply(x).map(|v| v.with_field(frame.field())))
        .collect::<Result<Vec<_>, _>>()?;
    Frame::new(frame.dim(), frame.field(), vectors)
}

pub fn is_unit_norm(frame: &Frame, tol: f64) -> bool {
    frame.vectors().iter().all(|v| (v.norm() - 1.0).abs() <= tol)
}

/// Maximum `|<x_j, x_k>|` over `j != k` of a unit-norm set.
pub fn coherence(frame: &Frame, tol: f64) -> Result<f64, FrameError> {
    if frame.len() < 2 {
        return Err(FrameError::TooFewVectors);
    }
    for (index, v) in frame.vectors().iter().enumerate() {
        let norm = v.norm();
        if (norm - 1.0).abs() > tol {
            return Err(FrameError::NotUnitNorm { index, norm });
        }
    }
    Ok(max_off_diagonal_correlation(frame))
}

fn max_off_diagonal_correlation(frame: &Frame) -> f64 {
    let v = frame.vectors();
    let mut mu = 0.0_f64;
    for j in 0..v.len() {
        for k in (j + 1)..v.len() {
            mu = mu.max(v[j].inner(&v[k]).norm());
        }
    }
    mu
}

/// `sqrt((N - d) / (d (N - 1)))`; zero when `N = d`.
pub fn welch_bound(n: usize, d: usize) -> Result<f64, FrameError> {
    if d == 0 || n < d {
        return Err(FrameError::BadCardinality { n, d });
    }
    if n == d {
        return Ok(0.0);
    }
    Ok(((n - d) as f64 / (d as f64 * (n - 1) as f64)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equiangularity {
    pub equiangular: bool,
    /// Mean off-diagonal Gram magnitude, present only when equiangular.
    pub alpha: Option<f64>,
}

pub fn is_equiangular(frame: &Frame, tol: f64) -> Result<Equiangularity, FrameError> {
    if frame.len() < 2 {
        return Err(FrameError::TooFewVectors);
    }
    let v = frame.vectors();
    let (mut lo, mut hi, mut sum, mut count) = (f64::INFINITY, 0.0_f64, 0.0, 0usize);
    for j in 0..v.len() {
        for k in (j + 1)..v.len() {
            let m = v[j].inner(&v[k]).norm();
            lo = lo.min(m);
            hi = hi.max(m);
            sum += m;
            count += 1;
        }
    }
    if hi - lo <= tol {
        Ok(Equiangularity {
            equiangular: true,
            alpha: Some(sum / count as f64),
        })
    } else {
        Ok(Equiangularity {
            equiangular: false,
            alpha: None,
        })
    }
}

/// Common angle of an equiangular `A`-tight frame of `N` vectors in `K^d`:
/// `(A / N) sqrt(d (N - d) / (N - 1))`.
pub fn equiangular_tight_angle(tight_bound: f64, n: usize, d: usize) -> f64 {
    let (n, d) = (n as f64, d as f64);
    tight_bound / n * (d * (n - d) / (n - 1.0)).sqrt()
}

/// `sum_{j,k} |<x_j, x_k>|^2`.
pub fn frame_potential(frame: &Frame) -> f64 {
    let v = frame.vectors();
    let mut total = 0.0;
    for a in v {
        for b in v {
            total += a.inner(b).norm_sqr();
        }
    }
    total
}

/// Coordinates of the orthogonal projections `P x_j` in the given orthonormal
/// basis of a subspace. A Parseval input gives a Parseval frame of `K^m`.
pub fn project_frame(frame: &Frame, basis: &[Vector], tol: f64) -> Result<Frame, FrameError> {
    if basis.is_empty() {
        return Err(FrameError::Empty);
    }
    for (index, b) in basis.iter().enumerate() {
        if b.dim() != frame.dim() {
            return Err(FrameError::DimMismatch {
                index,
                expected: frame.dim(),
                found: b.dim(),
            });
        }
    }
    let mut deviation = 0.0_f64;
    for (j, a) in basis.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            let want = if j == k { 1.0 } else { 0.0 };
            deviation = deviation.max((a.inner(b) - C64::new(want, 0.0)).norm());
        }
    }
    if deviation > tol {
        return Err(FrameError::BasisNotOrthonormal { deviation });
    }
    require_parseval(frame, tol)?;
    let field = basis.iter().fold(frame.field(), |f, b| f.join(b.field()));
    let vectors = frame
        .vectors()
        .iter()
        .map(|x| Vector::new(basis.iter().map(|b| x.inner(b)).collect(), field))
        .collect();
    Frame::new(basis.len(), field, vectors)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub dim: usize,
    pub count: usize,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_parseval: bool,
    pub is_tight: bool,
    pub is_unit_norm: bool,
    pub is_equiangular: bool,
    pub common_angle: Option<f64>,
    /// Present only for unit-norm frames with at least two vectors.
    pub coherence: Option<f64>,
    /// Present only when `N >= d`.
    pub welch_bound: Option<f64>,
    pub frame_potential: f64,
}

pub fn analyze(frame: &Frame, tol: f64) -> Result<FrameReport, FrameError> {
    let b = frame_bounds(frame)?;
    let unit = is_unit_norm(frame, tol);
    let eq = if frame.len() >= 2 {
        is_equiangular(frame, tol)?
    } else {
        Equiangularity {
            equiangular: false,
            alpha: None,
        }
    };
    Ok(FrameReport {
        dim: frame.dim(),
        count: frame.len(),
        lower_bound: b.lower,
        upper_bound: b.upper,
        is_parseval: (b.lower - 1.0).abs() <= tol && (b.upper - 1.0).abs() <= tol,
        is_tight: b.lower > tol && (b.upper - b.lower) <= tol * b.upper.max(1.0),
        is_unit_norm: unit,
        is_equiangular: eq.equiangular,
        common_angle: eq.alpha,
        coherence: if unit && frame.len() >= 2 {
            Some(max_off_diagonal_correlation(frame))
        } else {
            None
        },
        welch_bound: welch_bound(frame.len(), frame.dim()).ok(),
        frame_potential: frame_potential(frame),
    })
}

// ---- constructions ----

pub fn standard_onb(d: usize, field: Field) -> Frame {
    let vectors = (0..d).map(|k| Vector::basis(d, k, field)).collect();
    Frame::new(d, field, vectors).expect("d >= 1")
}

/// Modified Gram-Schmidt (two passes). Vectors whose residual falls below
/// `1e-12` of their original norm are dropped.
pub fn gram_schmidt(vectors: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let original = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                w = w.sub(&q.scale(w.inner(q)));
            }
        }
        let n = w.norm();
        if n > 1e-12 * original.max(f64::MIN_POSITIVE) {
            out.push(w.scale_real(1.0 / n).with_field(v.field()));
        }
    }
    out
}

pub fn random_onb_with<R: Rng + ?Sized>(rng: &mut R, d: usize, field: Field) -> Frame {
    loop {
        let raw: Vec<Vector> = (0..d).map(|_| gaussian_vector(rng, d, field)).collect();
        let q = gram_schmidt(&raw);
        if q.len() == d {
            return Frame::new(d, field, q).expect("d vectors of dim d");
        }
    }
}

pub fn random_onb(d: usize, field: Field, seed: u64) -> Frame {
    random_onb_with(&mut seeded(seed), d, field)
}

/// `n` i.i.d. standard Gaussian vectors.
pub fn gaussian_frame<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, field: Field) -> Frame {
    let vectors = (0..n).map(|_| gaussian_vector(rng, d, field)).collect();
    Frame::new(d, field, vectors).expect("n >= 1")
}

/// Random Parseval frame: the first `d` coordinates of a random orthonormal
/// basis of `K^n`. The rows of a unitary matrix are orthonormal, so the frame
/// operator is the identity up to rounding for every draw.
pub fn random_parseval_with<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    n: usize,
    field: Field,
) -> Result<Frame, FrameError> {
    if d == 0 || n < d {
        return Err(FrameError::BadCardinality { n, d });
    }
    let q = random_onb_with(rng, n, field);
    let vectors = (0..n)
        .map(|j| Vector::new((0..d).map(|a| q.vector(a)[j]).collect(), field))
        .collect();
    Frame::new(d, field, vectors)
}

pub fn random_parseval(d: usize, n: usize, field: Field, seed: u64) -> Result<Frame, FrameError> {
    random_parseval_with(&mut seeded(seed), d, n, field)
}

/// Regular simplex: `d + 1` unit vectors in `R^d` with pairwise inner product `-1/d`.
///
/// The standard basis of `R^{d+1}` is projected onto the complement of
/// `(1, ..., 1)`, normalized, and expressed in the orthonormal basis obtained
/// from Gram-Schmidt on the first `d` projected vectors, so the first vertex
/// is `e_1`.
pub fn simplex_etf(d: usize) -> Result<Frame, FrameError> {
    if d == 0 {
        return Err(FrameError::BadCardinality { n: 1, d });
    }
    let m = d + 1;
    let mean = 1.0 / m as f64;
    let lifted: Vec<Vector> = (0..m)
        .map(|i| {
            let e: Vec<f64> = (0..m).map(|k| if k == i { 1.0 } else { 0.0 } - mean).collect();
            let v = Vector::real(&e);
            let n = v.norm();
            v.scale_real(1.0 / n)
        })
        .collect();
    let basis = gram_schmidt(&lifted[..d]);
    debug_assert_eq!(basis.len(), d);
    let vectors = lifted
        .iter()
        .map(|w| Vector::new(basis.iter().map(|b| w.inner(b)).collect(), Field::Real))
        .collect();
    Frame::new(d, Field::Real, vectors)
}

/// Harmonic frame `x_m = N^{-1/2} (e^{2 pi i m s(1)/N}, ..., e^{2 pi i m s(d)/N})`,
/// `m = 1..N`, with a strictly increasing one-based selector `s` into `1..=N`.
pub fn harmonic_frame(d: usize, n: usize, selector: &[usize]) -> Result<Frame, FrameError> {
    if d == 0 || n < d {
        return Err(FrameError::BadCardinality { n, d });
    }
    if selector.len() != d {
        return Err(FrameError::BadSelector(format!(
            "selector has {} entries, expected {d}",
            selector.len()
        )));
    }
    if selector[0] < 1 || selector.windows(2).any(|w| w[0] >= w[1]) || selector[d - 1] > n {
        return Err(FrameError::BadSelector(format!(
            "selector {selector:?} must be strictly increasing within 1..={n}"
        )));
    }
    let c = 1.0 / (n as f64).sqrt();
    let vectors = (1..=n)
        .map(|m| {
            Vector::complex(
                selector
                    .iter()
                    .map(|&s| {
                        // reduce m*s mod n before forming the angle
                        let k = (m * s) % n;
                        C64::from_polar(c, 2.0 * PI * k as f64 / n as f64)
                    })
                    .collect(),
            )
        })
        .collect();
    Frame::new(d, Field::Complex, vectors)
}

/// Appends `k` zero vectors.
pub fn with_zeros(frame: &Frame, k: usize) -> Frame {
    let mut vectors = frame.vectors().to_vec();
    vectors.extend((0..k).map(|_| Vector::zeros(frame.dim(), frame.field())));
    Frame::new(frame.dim(), frame.field(), vectors).expect("same dimension")
}

/// Frame operator's trace-of-square, `tr(S^2)`, which equals the frame potential.
pub fn frame_operator_square_trace(frame: &Frame) -> f64 {
    let s = frame_operator(frame);
    let s2 = s.mul(&s).expect("square");
    linalg::trace(&s2).expect("square").re
}

/// Rank-one decomposition check used by tests and the POVM layer.
pub fn rank_one_sum(vectors: &[Vector], d: usize) -> Matrix {
    let mut s = Matrix::zeros(d, d);
    for v in vectors {
        s = s.add(&outer(v, v).expect("same dim")).expect("same dim");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::rng::{seeded, sphere_point};

    fn r(x: &[f64]) -> Vector {
        Vector::real(x)
    }

    #[test]
    fn frame_operator_examples() {
        assert!(frame_operator(&standard_onb(3, Field::Real)).max_diff(&Matrix::identity(3)) < 1e-15);
        let f = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[1.0, 0.0])]).unwrap();
        assert_eq!(frame_operator(&f), Matrix::from_diag(&[2.0, 0.0]));
        let s = frame_operator(&simplex_etf(2).unwrap());
        assert!(s.max_diff(&Matrix::identity(2).scale_real(1.5)) < 1e-14);
    }

    #[test]
    fn frame_bounds_examples() {
        let b = frame_bounds(&standard_onb(4, Field::Complex)).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let f = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[1.0, 0.0])]).unwrap();
        let b = frame_bounds(&f).unwrap();
        assert!(b.lower.abs() < 1e-15 && (b.upper - 2.0).abs() < 1e-15);
        let b = frame_bounds(&harmonic_frame(2, 3, &[1, 2]).unwrap()).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_parseval_examples() {
        let onb = random_onb(3, Field::Complex, 1);
        let p = canonical_parseval(&onb, DEFAULT_TOL).unwrap();
        for (a, b) in p.vectors().iter().zip(onb.vectors()) {
            assert!(a.sub(b).norm() < 1e-12);
        }
        let f = Frame::from_vectors(vec![r(&[2.0, 0.0]), r(&[0.0, 3.0])]).unwrap();
        let p = canonical_parseval(&f, DEFAULT_TOL).unwrap();
        assert!(p.vector(0).sub(&r(&[1.0, 0.0])).norm() < 1e-15);
        assert!(p.vector(1).sub(&r(&[0.0, 1.0])).norm() < 1e-15);
        let g = gaussian_frame(&mut seeded(5), 3, 10, Field::Complex);
        let b = frame_bounds(&canonical_parseval(&g, DEFAULT_TOL).unwrap()).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);
        let degenerate = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[1.0, 0.0])]).unwrap();
        assert!(matches!(
            canonical_parseval(&degenerate, DEFAULT_TOL),
            Err(FrameError::NotAFrame { .. })
        ));
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(coherence(&standard_onb(3, Field::Real), DEFAULT_TOL).unwrap(), 0.0);
        let mu = coherence(&simplex_etf(2).unwrap(), DEFAULT_TOL).unwrap();
        assert!((mu - 0.5).abs() < 1e-15);
        let e1 = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[1.0, 0.0])]).unwrap();
        assert_eq!(coherence(&e1, DEFAULT_TOL).unwrap(), 1.0);
        let h = harmonic_frame(2, 3, &[1, 2]).unwrap();
        assert!(matches!(
            coherence(&h, DEFAULT_TOL),
            Err(FrameError::NotUnitNorm { .. })
        ));
        let single = Frame::from_vectors(vec![r(&[1.0])]).unwrap();
        assert_eq!(coherence(&single, DEFAULT_TOL), Err(FrameError::TooFewVectors));
    }

    #[test]
    fn welch_bound_examples() {
        assert_eq!(welch_bound(4, 4).unwrap(), 0.0);
        assert!((welch_bound(3, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((welch_bound(9, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(welch_bound(2, 3), Err(FrameError::BadCardinality { .. })));
    }

    #[test]
    fn equiangular_examples() {
        let s = simplex_etf(4).unwrap();
        let eq = is_equiangular(&s, 1e-12).unwrap();
        let want = equiangular_tight_angle(5.0 / 4.0, 5, 4);
        assert!(eq.equiangular);
        assert!((eq.alpha.unwrap() - want).abs() < 1e-12);
        let onb = is_equiangular(&standard_onb(3, Field::Real), 1e-12).unwrap();
        assert_eq!(
            onb,
            Equiangularity {
                equiangular: true,
                alpha: Some(0.0)
            }
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[0.0, 1.0]), r(&[h, h])]).unwrap();
        assert_eq!(
            is_equiangular(&f, 1e-12).unwrap(),
            Equiangularity {
                equiangular: false,
                alpha: None
            }
        );
    }

    #[test]
    fn potential_examples() {
        assert!((frame_potential(&standard_onb(5, Field::Real)) - 5.0).abs() < 1e-15);
        let p = random_parseval(3, 7, Field::Complex, 2).unwrap();
        assert!((frame_potential(&p) - 3.0).abs() < 1e-10);
        assert!((frame_potential(&p) - frame_operator_square_trace(&p)).abs() < 1e-10);
        assert!((frame_potential(&simplex_etf(2).unwrap()) - 4.5).abs() < 1e-14);
    }

    #[test]
    fn project_examples() {
        let onb = standard_onb(3, Field::Real);
        let basis = [Vector::basis(3, 0, Field::Real), Vector::basis(3, 1, Field::Real)];
        let p = project_frame(&onb, &basis, DEFAULT_TOL).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vector(2), &Vector::zeros(2, Field::Real));
        assert!(is_parseval(&p, DEFAULT_TOL).unwrap());

        let sub = random_onb(4, Field::Complex, 9);
        let basis = &sub.vectors()[..2];
        let p = project_frame(&standard_onb(4, Field::Complex), basis, DEFAULT_TOL).unwrap();
        let b = frame_bounds(&p).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);

        let bad = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[1.0, 0.0]), r(&[0.0, 1.0])]).unwrap();
        let basis2 = [Vector::basis(2, 0, Field::Real)];
        assert!(matches!(
            project_frame(&bad, &basis2, DEFAULT_TOL),
            Err(FrameError::NotParseval { .. })
        ));
        let skewed = [r(&[1.0, 0.0, 0.0]), r(&[1.0, 1.0, 0.0])];
        assert!(matches!(
            project_frame(&onb, &skewed, DEFAULT_TOL),
            Err(FrameError::BasisNotOrthonormal { .. })
        ));
    }

    #[test]
    fn constructions() {
        let h = harmonic_frame(2, 3, &[1, 2]).unwrap();
        for v in h.vectors() {
            assert!((v.norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        }
        let s = simplex_etf(2).unwrap();
        let want = [[1.0, 0.0], [-0.5, 3f64.sqrt() / 2.0], [-0.5, -(3f64.sqrt()) / 2.0]];
        for (v, w) in s.vectors().iter().zip(want) {
            assert!(v.sub(&r(&w)).norm() < 1e-15, "{v:?}");
        }
        let z = with_zeros(&standard_onb(3, Field::Real), 2);
        assert_eq!(z.len(), 5);
        assert!(is_parseval(&z, DEFAULT_TOL).unwrap());
        assert!(is_parseval(&random_onb(5, Field::Real, 4), 1e-12).unwrap());
        assert!(matches!(
            harmonic_frame(3, 2, &[1, 2, 3]),
            Err(FrameError::BadCardinality { .. })
        ));
        assert!(matches!(harmonic_frame(2, 4, &[2, 2]), Err(FrameError::BadSelector(_))));
        assert!(matches!(harmonic_frame(2, 4, &[1, 5]), Err(FrameError::BadSelector(_))));
        assert!(matches!(harmonic_frame(2, 4, &[0, 1]), Err(FrameError::BadSelector(_))));
        assert!(matches!(
            random_parseval(3, 2, Field::Real, 0),
            Err(FrameError::BadCardinality { .. })
        ));
    }

    #[test]
    fn unit_norm_parseval_is_onb() {
        // Unit-norm Parseval frames are orthonormal bases: N = d and Gram = I.
        for seed in 0..5 {
            let onb = random_onb(4, Field::Complex, seed);
            assert!(is_unit_norm(&onb, 1e-12) && is_parseval(&onb, 1e-10).unwrap());
            assert_eq!(onb.len(), onb.dim());
            assert!(onb.gram().max_diff(&Matrix::identity(4)) < 1e-12);
        }
        // a unit-norm tight frame with N > d is never Parseval
        assert!(!is_parseval(&simplex_etf(3).unwrap(), 1e-10).unwrap());
    }

    #[test]
    fn one_dimensional_parseval_criterion() {
        let mut rng = seeded(12);
        for _ in 0..50 {
            let n = rng.gen_range(1..6);
            let vectors: Vec<Vector> = (0..n).map(|_| gaussian_vector(&mut rng, 1, Field::Complex)).collect();
            let f = Frame::from_vectors(vectors).unwrap();
            let total: f64 = f.vectors().iter().map(Vector::norm_sqr).sum();
            let scaled =
                Frame::from_vectors(f.vectors().iter().map(|v| v.scale_real(total.sqrt().recip())).collect()).unwrap();
            assert!(is_parseval(&scaled, 1e-10).unwrap());
            assert_eq!(is_parseval(&f, 1e-10).unwrap(), (total - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn analyze_report() {
        let rep = analyze(&simplex_etf(2).unwrap(), DEFAULT_TOL).unwrap();
        assert!(rep.is_equiangular && rep.is_tight && rep.is_unit_norm && !rep.is_parseval);
        assert!((rep.coherence.unwrap() - 0.5).abs() < 1e-15);
        assert!((rep.welch_bound.unwrap() - 0.5).abs() < 1e-15);
        let f = Frame::from_vectors(vec![r(&[1.0, 0.0]), r(&[1.0, 0.0])]).unwrap();
        let rep = analyze(&f, DEFAULT_TOL).unwrap();
        assert!(rep.lower_bound.abs() < 1e-15 && !rep.is_parseval && !rep.is_tight);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let f = harmonic_frame(2, 3, &[1, 2]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with("{\"dim\":2,\"field\":\"C\",\"vectors\":"));
        let back: Frame = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"dim": 2, "field": "R", "vectors": [[1, 0], [1]]}"#;
        assert!(serde_json::from_str::<Frame>(bad).is_err());
    }

    #[test]
    fn analysis_energy_matches_norm_on_parseval() {
        let f = random_parseval(3, 6, Field::Complex, 8).unwrap();
        let mut rng = seeded(8);
        for _ in 0..20 {
            let y = sphere_point(&mut rng, 3, Field::Complex);
            assert!((f.analysis_energy(&y) - 1.0).abs() < 1e-12);
        }
    }
}
