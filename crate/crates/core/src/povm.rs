//! Effects, POVMs and density operators.
//!
//! A Parseval frame `{x_j}` gives the rank-one POVM `{x_j x_j*}`, and grouping
//! the frame by a partition `{B_i}` gives `{sum_{j in B_i} x_j x_j*}`. In the
//! other direction every effect splits along its spectrum into rank-one
//! pieces `sqrt(lambda) e`, and the concatenation of those pieces over a POVM
//! is a Parseval frame. Partitions use zero-based indices.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{run_trials, Mode};
use crate::frames::{random_parseval_with, require_parseval, Frame, FrameError};
use crate::linalg::{hermitian_eig, outer, trace, Field, LinalgError, Matrix, Vector, C64};
use crate::rng::{gaussian_matrix, trial_rng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PovmError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("not an effect: {0}")]
    NotEffect(String),
    #[error("not a POVM: {0}")]
    NotPovm(String),
    #[error("not a density operator: {0}")]
    NotDensity(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("family size {n} is below d + 2 = {min}")]
    BadFamilySize { n: usize, min: usize },
}

/// Hermitian `E` with `0 <= E <= I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Effect(Matrix);

impl Effect {
    pub fn new(m: Matrix, tol: f64) -> Result<Self, PovmError> {
        check_effect(&m, tol)?;
        Ok(Effect(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// `I - E`, again an effect.
    pub fn complement(&self) -> Effect {
        Effect(Matrix::identity(self.dim()).sub(&self.0).expect("square"))
    }
}

fn check_effect(m: &Matrix, tol: f64) -> Result<(), PovmError> {
    if !m.is_square() {
        return Err(PovmError::NotEffect(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let eig = hermitian_eig(m, tol).map_err(|e| PovmError::NotEffect(e.to_string()))?;
    if eig.min() < -tol || eig.max() > 1.0 + tol {
        return Err(PovmError::NotEffect(format!(
            "spectrum [{}, {}] leaves [0, 1]",
            eig.min(),
            eig.max()
        )));
    }
    Ok(())
}

/// An ordered family of effects summing to the identity, with an optional
/// record of which frame vectors each effect groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmRepr")]
pub struct Povm {
    dim: usize,
    effects: Vec<Effect>,
    partition: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
struct PovmRepr {
    dim: usize,
    effects: Vec<Matrix>,
    #[serde(default)]
    partition: Option<Vec<Vec<usize>>>,
}

impl TryFrom<PovmRepr> for Povm {
    type Error = PovmError;
    // Shape checks only; spectral validity is checked by `validate`.
    fn try_from(r: PovmRepr) -> Result<Self, PovmError> {
        if r.effects.is_empty() {
            return Err(PovmError::NotPovm("no effects".into()));
        }
        for m in &r.effects {
            if m.rows() != r.dim || m.cols() != r.dim {
                return Err(PovmError::DimMismatch {
                    left: r.dim,
                    right: m.rows().max(m.cols()),
                });
            }
        }
        if let Some(p) = &r.partition {
            if p.len() != r.effects.len() {
                return Err(PovmError::BadPartition(format!(
                    "{} groups for {} effects",
                    p.len(),
                    r.effects.len()
                )));
            }
        }
        Ok(Povm {
            dim: r.dim,
            effects: r.effects.into_iter().map(Effect).collect(),
            partition: r.partition,
        })
    }
}

impl Povm {
    pub fn new(effects: Vec<Matrix>, tol: f64) -> Result<Self, PovmError> {
        let dim = effects
            .first()
            .map(Matrix::rows)
            .ok_or_else(|| PovmError::NotPovm("no effects".into()))?;
        let p = Povm::try_from(PovmRepr {
            dim,
            effects,
            partition: None,
        })?;
        p.validate(tol)?;
        Ok(p)
    }

    /// Every member is an effect and `||sum E_j - I||_max <= tol`.
    pub fn validate(&self, tol: f64) -> Result<(), PovmError> {
        for (j, e) in self.effects.iter().enumerate() {
            check_effect(e.matrix(), tol).map_err(|err| PovmError::NotPovm(format!("effect {j}: {err}")))?;
        }
        let dev = self.identity_deviation();
        if dev > tol {
            return Err(PovmError::NotPovm(format!("effects sum to I only within {dev:e}")));
        }
        Ok(())
    }

    pub fn identity_deviation(&self) -> f64 {
        self.sum().max_diff(&Matrix::identity(self.dim))
    }

    pub fn sum(&self) -> Matrix {
        self.effects.iter().fold(Matrix::zeros(self.dim, self.dim), |acc, e| {
            acc.add(e.matrix()).expect("same dim")
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn partition(&self) -> Option<&[Vec<usize>]> {
        self.partition.as_deref()
    }

    /// Appends `k` zero effects.
    pub fn with_zero_effects(mut self, k: usize) -> Povm {
        let z = Matrix::zeros(self.dim, self.dim);
        self.effects.extend((0..k).map(|_| Effect(z.clone())));
        self.partition = None;
        self
    }
}

/// Hermitian positive semidefinite with unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityOperator {
    matrix: Matrix,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dim: usize,
    matrix: Matrix,
}

impl TryFrom<DensityRepr> for DensityOperator {
    type Error = PovmError;
    fn try_from(r: DensityRepr) -> Result<Self, PovmError> {
        if r.matrix.rows() != r.dim {
            return Err(PovmError::DimMismatch {
                left: r.dim,
                right: r.matrix.rows(),
            });
        }
        DensityOperator::new(r.matrix, crate::linalg::DEFAULT_TOL)
    }
}

impl From<DensityOperator> for DensityRepr {
    fn from(d: DensityOperator) -> Self {
        DensityRepr {
            dim: d.matrix.rows(),
            matrix: d.matrix,
        }
    }
}

impl DensityOperator {
    pub fn new(m: Matrix, tol: f64) -> Result<Self, PovmError> {
        let eig = hermitian_eig(&m, tol).map_err(|e| PovmError::NotDensity(e.to_string()))?;
        if eig.min() < -tol {
            return Err(PovmError::NotDensity(format!("negative eigenvalue {}", eig.min())));
        }
        let tr = trace(&m)?;
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(PovmError::NotDensity(format!("trace {tr} is not 1")));
        }
        Ok(DensityOperator { matrix: m })
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator {
            matrix: Matrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    /// The pure state `x x*` for a unit vector `x`.
    pub fn pure(x: &Vector, tol: f64) -> Result<Self, PovmError> {
        DensityOperator::new(outer(x, x)?, tol)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `tr(rho E)`.
    pub fn expectation(&self, e: &Matrix) -> C64 {
        trace_of_product(&self.matrix, e)
    }
}

/// `G G* / tr(G G*)` for a Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize, field: Field) -> DensityOperator {
    loop {
        let g = gaussian_matrix(rng, d, d, field);
        let m = g.mul(&g.adjoint()).expect("square").hermitian_part();
        let tr = trace(&m).expect("square").re;
        if tr > 1e-12 {
            return DensityOperator {
                matrix: m.scale_real(1.0 / tr),
            };
        }
    }
}

/// `tr(AB)` without forming the product.
pub fn trace_of_product(a: &Matrix, b: &Matrix) -> C64 {
    let n = a.rows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// `{x_j x_j*}` for a Parseval frame.
pub fn povm_from_frame(frame: &Frame, tol: f64) -> Result<Povm, PovmError> {
    let partition: Vec<Vec<usize>> = (0..frame.len()).map(|j| vec![j]).collect();
    let mut p = povm_from_frame_grouped(frame, &partition, tol)?;
    p.partition = None;
    Ok(p)
}

/// Checks that `partition` is a disjoint cover of `0..n`. Empty groups are allowed.
pub fn check_partition(partition: &[Vec<usize>], n: usize) -> Result<(), PovmError> {
    let mut seen = vec![false; n];
    for group in partition {
        for &j in group {
            if j >= n {
                return Err(PovmError::BadPartition(format!("index {j} out of range 0..{n}")));
            }
            if seen[j] {
                return Err(PovmError::BadPartition(format!("index {j} appears twice")));
            }
            seen[j] = true;
        }
    }
    if let Some(gap) = seen.iter().position(|s| !s) {
        return Err(PovmError::BadPartition(format!("index {gap} is not covered")));
    }
    Ok(())
}

/// Effect `i` is `sum_{j in B_i} x_j x_j*`.
pub fn povm_from_frame_grouped(frame: &Frame, partition: &[Vec<usize>], tol: f64) -> Result<Povm, PovmError> {
    require_parseval(frame, tol)?;
    check_partition(partition, frame.len())?;
    let d = frame.dim();
    let effects = partition
        .iter()
        .map(|group| {
            let mut e = Matrix::zeros(d, d);
            for &j in group {
                let x = frame.vector(j);
                for a in 0..d {
                    for b in 0..d {
                        e[(a, b)] += x[a] * x[b].conj();
                    }
                }
            }
            Effect(e)
        })
        .collect();
    Ok(Povm {
        dim: d,
        effects,
        partition: Some(partition.to_vec()),
    })
}

/// Effect eigenvalues at or below this are rounding noise. Kept separate from
/// the validation tolerance: dropping a genuine eigenvalue of size `tol` would
/// break the Parseval property by `tol`.
pub const ZERO_EIGENVALUE: f64 = 1e-13;

/// A frame together with the grouping that maps it back onto a POVM.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedFrame {
    #[serde(flatten)]
    pub frame: Frame,
    pub partition: Vec<Vec<usize>>,
    /// Eigenvalues at or below [`ZERO_EIGENVALUE`] that produced no frame vector.
    pub dropped: usize,
}

/// Splits each effect along its spectrum into vectors `sqrt(lambda) e` and
/// concatenates them. Eigenvalues at or below [`ZERO_EIGENVALUE`] are dropped unless `pad_zeros`
/// is set, in which case every effect contributes exactly `d` vectors.
pub fn frame_from_povm(povm: &Povm, tol: f64, pad_zeros: bool) -> Result<GroupedFrame, PovmError> {
    povm.validate(tol)?;
    let d = povm.dim();
    let real = povm.effects.iter().all(|e| e.matrix().is_real(0.0));
    let field = if real { Field::Real } else { Field::Complex };
    let mut vectors = Vec::new();
    let mut partition = Vec::with_capacity(povm.len());
    let mut dropped = 0;
    for e in &povm.effects {
        let eig = hermitian_eig(e.matrix(), tol)?;
        let mut group = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= ZERO_EIGENVALUE {
                dropped += 1;
                if !pad_zeros {
                    continue;
                }
                group.push(vectors.len());
                vectors.push(Vector::zeros(d, field));
                continue;
            }
            group.push(vectors.len());
            vectors.push(eig.eigenvector(k).scale_real(lambda.sqrt()).with_field(field));
        }
        partition.push(group);
    }
    let frame = Frame::new(d, field, vectors)?;
    Ok(GroupedFrame {
        frame,
        partition,
        dropped,
    })
}

/// `p_i = tr(rho E_i)`.
pub fn born_probabilities(rho: &DensityOperator, povm: &Povm) -> Result<Vec<f64>, PovmError> {
    if rho.dim() != povm.dim() {
        return Err(PovmError::DimMismatch {
            left: rho.dim(),
            right: povm.dim(),
        });
    }
    Ok(povm.effects.iter().map(|e| rho.expectation(e.matrix()).re).collect())
}

/// Random assignment of `0..n` to `groups` labels; groups may come out empty.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize, groups: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); groups];
    for j in 0..n {
        out[rng.gen_range(0..groups)].push(j);
    }
    out
}

/// Random partition of `0..n` into exactly `groups` nonempty blocks (`n >= groups`).
pub fn random_nonempty_partition<R: Rng + ?Sized>(rng: &mut R, n: usize, groups: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut out: Vec<Vec<usize>> = idx[..groups].iter().map(|&j| vec![j]).collect();
    for &j in &idx[groups..] {
        out[rng.gen_range(0..groups)].push(j);
    }
    for g in &mut out {
        g.sort_unstable();
    }
    out
}

/// A POVM with exactly `n_effects` members obtained by grouping a random
/// Parseval frame of `frame_len >= d` vectors.
pub fn random_grouped_povm<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    frame_len: usize,
    n_effects: usize,
    field: Field,
    tol: f64,
) -> Result<Povm, PovmError> {
    let frame = random_parseval_with(rng, d, frame_len, field)?;
    let partition = random_partition(rng, frame_len, n_effects);
    povm_from_frame_grouped(&frame, &partition, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub dim: usize,
    pub family_size: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest amount by which `v(E)` left `[0, 1]` on a sampled effect.
    pub max_range_violation: f64,
    /// `|v(I) - 1|`.
    pub unit_deviation: f64,
    /// Largest `|sum_i v(E_i) - 1|` over sampled `N`-element POVMs.
    pub max_additivity_deviation: f64,
    pub passed: bool,
    /// The worst POVM, present when additivity fails.
    pub witness: Option<Povm>,
    pub witness_sum: Option<f64>,
    pub mode: Mode,
}

/// Empirical check of the generalized-probability-measure conditions using
/// the finite-family form: `0 <= v <= 1` on sampled effects, `v(I) = 1`, and
/// `sum v(E_i) = 1` on random `N`-element POVMs with `N >= d + 2`.
///
/// The sampled POVMs group random Parseval frames by random assignments, so
/// zero effects occur; the padded family `{I, 0, ..., 0}` is always included.
#[allow(clippy::too_many_arguments)]
pub fn check_generalized_measure(
    v: &(dyn Fn(&Matrix) -> f64 + Sync),
    d: usize,
    field: Field,
    n_family: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    mode: Mode,
) -> Result<MeasureReport, PovmError> {
    if n_family < d + 2 {
        return Err(PovmError::BadFamilySize {
            n: n_family,
            min: d + 2,
        });
    }
    let identity = Matrix::identity(d);
    let unit_deviation = (v(&identity) - 1.0).abs();

    let range_violation = |x: f64| (-x).max(x - 1.0).max(0.0);

    let padded = Povm {
        dim: d,
        effects: vec![Effect(identity.clone())],
        partition: None,
    }
    .with_zero_effects(n_family - 1);

    let outcomes = run_trials(trials, mode, |t| -> Result<(f64, f64, Povm), PovmError> {
        let mut rng = trial_rng(seed, t as u64);
        let frame_len = rng.gen_range(d.max(2)..=n_family + d);
        let povm = random_grouped_povm(&mut rng, d, frame_len, n_family, field, 1e-8)?;
        let mut range = 0.0_f64;
        let mut total = 0.0;
        for e in povm.effects() {
            let value = v(e.matrix());
            total += value;
            range = range.max(range_violation(value));
            range = range.max(range_violation(v(e.complement().matrix())));
        }
        Ok(((total - 1.0).abs(), range, povm))
    });

    let padded_total: f64 = padded.effects().iter().map(|e| v(e.matrix())).sum();
    let mut worst = ((padded_total - 1.0).abs(), padded_total, padded);
    let mut max_range = range_violation(v(&identity));
    for o in outcomes {
        let (dev, range, povm) = o?;
        max_range = max_range.max(range);
        if dev > worst.0 {
            let total: f64 = povm.effects().iter().map(|e| v(e.matrix())).sum();
            worst = (dev, total, povm);
        }
    }
    let additivity_ok = worst.0 <= tol;
    let passed = additivity_ok && unit_deviation <= tol && max_range <= tol;
    Ok(MeasureReport {
        dim: d,
        family_size: n_family,
        trials,
        seed,
        max_range_violation: max_range,
        unit_deviation,
        max_additivity_deviation: worst.0,
        passed,
        witness_sum: (!additivity_ok).then_some(worst.1),
        witness: (!additivity_ok).then_some(worst.2),
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{frame_bounds, harmonic_frame, random_parseval, standard_onb};
    use crate::linalg::DEFAULT_TOL;
    use crate::rng::{seeded, sphere_point};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn povm_from_onb() {
        let p = povm_from_frame(&standard_onb(2, Field::Real), DEFAULT_TOL).unwrap();
        assert_eq!(p.effects()[0].matrix(), &Matrix::from_diag(&[1.0, 0.0]));
        assert_eq!(p.effects()[1].matrix(), &Matrix::from_diag(&[0.0, 1.0]));
        assert!(p.partition().is_none());
    }

    #[test]
    fn povm_from_harmonic_is_rank_one_resolution() {
        let p = povm_from_frame(&harmonic_frame(2, 3, &[1, 2]).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.identity_deviation() < 1e-10);
        for e in p.effects() {
            let eig = hermitian_eig(e.matrix(), DEFAULT_TOL).unwrap();
            assert!(eig.eigenvalues[0].abs() < 1e-12, "rank one");
        }
    }

    #[test]
    fn povm_from_non_parseval_fails() {
        let e1 = Vector::basis(2, 0, Field::Real);
        let f = Frame::from_vectors(vec![e1.clone(), e1]).unwrap();
        assert!(matches!(
            povm_from_frame(&f, DEFAULT_TOL),
            Err(PovmError::Frame(FrameError::NotParseval { .. }))
        ));
    }

    #[test]
    fn grouped_examples() {
        let onb = standard_onb(3, Field::Real);
        let p = povm_from_frame_grouped(&onb, &[vec![0, 1], vec![2]], DEFAULT_TOL).unwrap();
        assert_eq!(p.effects()[0].matrix(), &Matrix::from_diag(&[1.0, 1.0, 0.0]));
        assert_eq!(p.effects()[1].matrix(), &Matrix::from_diag(&[0.0, 0.0, 1.0]));

        let f = random_parseval(3, 5, Field::Complex, 3).unwrap();
        let singletons: Vec<Vec<usize>> = (0..5).map(|j| vec![j]).collect();
        let a = povm_from_frame_grouped(&f, &singletons, DEFAULT_TOL).unwrap();
        let b = povm_from_frame(&f, DEFAULT_TOL).unwrap();
        assert_eq!(a.effects(), b.effects());

        let h = harmonic_frame(2, 4, &[1, 2]).unwrap();
        let p = povm_from_frame_grouped(&h, &[vec![0, 2], vec![1, 3]], DEFAULT_TOL).unwrap();
        assert!(p.identity_deviation() < 1e-10);
        for e in p.effects() {
            assert!(hermitian_eig(e.matrix(), DEFAULT_TOL).unwrap().min() > -1e-12);
        }

        assert!(matches!(
            povm_from_frame_grouped(&onb, &[vec![0, 1], vec![1, 2]], DEFAULT_TOL),
            Err(PovmError::BadPartition(_))
        ));
        assert!(matches!(
            povm_from_frame_grouped(&onb, &[vec![0], vec![2]], DEFAULT_TOL),
            Err(PovmError::BadPartition(_))
        ));
        assert!(matches!(
            povm_from_frame_grouped(&onb, &[vec![0, 1, 2, 3]], DEFAULT_TOL),
            Err(PovmError::BadPartition(_))
        ));
    }

    #[test]
    fn frame_from_identity_povm() {
        let p = Povm::new(vec![Matrix::identity(2)], DEFAULT_TOL).unwrap();
        let g = frame_from_povm(&p, DEFAULT_TOL, false).unwrap();
        assert_eq!(g.frame.len(), 2);
        assert!(crate::frames::is_parseval(&g.frame, 1e-12).unwrap());
        assert_eq!(g.partition, vec![vec![0, 1]]);
    }

    #[test]
    fn frame_from_half_projection_povm() {
        let e1 = Vector::basis(2, 0, Field::Real);
        let e = outer(&e1, &e1).unwrap().scale_real(0.5);
        let rest = Matrix::identity(2).sub(&e).unwrap();
        let p = Povm::new(vec![e, rest], DEFAULT_TOL).unwrap();
        let g = frame_from_povm(&p, DEFAULT_TOL, false).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = g.frame.vectors();
        assert_eq!(v.len(), 3);
        assert_eq!(g.dropped, 1);
        assert!(v[0].sub(&Vector::real(&[h, 0.0])).norm() < 1e-15);
        // I - E = diag(1/2, 1): ascending eigenvalues give e1/sqrt2 then e2
        assert!(v[1].sub(&Vector::real(&[h, 0.0])).norm() < 1e-15);
        assert!(v[2].sub(&Vector::real(&[0.0, 1.0])).norm() < 1e-15);
        assert_eq!(g.partition, vec![vec![0], vec![1, 2]]);

        let padded = frame_from_povm(&p, DEFAULT_TOL, true).unwrap();
        assert_eq!(padded.frame.len(), 4);
        assert_eq!(padded.partition, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn roundtrip_random_parseval() {
        let f = random_parseval(3, 5, Field::Complex, 1).unwrap();
        let p = povm_from_frame(&f, DEFAULT_TOL).unwrap();
        let g = frame_from_povm(&p, DEFAULT_TOL, false).unwrap();
        let b = frame_bounds(&g.frame).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);
        let again = povm_from_frame_grouped(&g.frame, &g.partition, DEFAULT_TOL).unwrap();
        for (a, b) in again.effects().iter().zip(p.effects()) {
            assert!(a.matrix().max_diff(b.matrix()) < 1e-9);
        }
    }

    #[test]
    fn frame_from_invalid_povm() {
        let p: Povm = serde_json::from_str(r#"{"dim": 2, "effects": [[[1,0],[0,0]]], "partition": null}"#).unwrap();
        assert!(matches!(
            frame_from_povm(&p, DEFAULT_TOL, false),
            Err(PovmError::NotPovm(_))
        ));
        let neg: Povm = serde_json::from_str(r#"{"dim": 1, "effects": [[[2]], [[-1]]]}"#).unwrap();
        assert!(matches!(neg.validate(DEFAULT_TOL), Err(PovmError::NotPovm(_))));
    }

    #[test]
    fn born_examples() {
        let f = random_parseval(3, 6, Field::Complex, 2).unwrap();
        let p = povm_from_frame(&f, DEFAULT_TOL).unwrap();
        let probs = born_probabilities(&DensityOperator::maximally_mixed(3), &p).unwrap();
        for (pj, x) in probs.iter().zip(f.vectors()) {
            assert!((pj - x.norm_sqr() / 3.0).abs() < 1e-14);
        }
        let e1 = Vector::basis(3, 0, Field::Real);
        let onb = povm_from_frame(&standard_onb(3, Field::Real), DEFAULT_TOL).unwrap();
        let probs = born_probabilities(&DensityOperator::pure(&e1, DEFAULT_TOL).unwrap(), &onb).unwrap();
        assert_eq!(probs, vec![1.0, 0.0, 0.0]);

        let mut rng = seeded(4);
        let rho = random_density(&mut rng, 3, Field::Complex);
        let grouped = random_grouped_povm(&mut rng, 3, 7, 4, Field::Complex, DEFAULT_TOL).unwrap();
        let probs = born_probabilities(&rho, &grouped).unwrap();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(probs.iter().all(|&p| p >= -1e-10));
        assert!(matches!(
            born_probabilities(&DensityOperator::maximally_mixed(2), &onb),
            Err(PovmError::DimMismatch { .. })
        ));
    }

    #[test]
    fn born_grouped_equals_summed_flat() {
        let mut rng = seeded(6);
        let f = random_parseval_with(&mut rng, 3, 8, Field::Complex).unwrap();
        let partition = random_nonempty_partition(&mut rng, 8, 3);
        let rho = random_density(&mut rng, 3, Field::Complex);
        let flat = born_probabilities(&rho, &povm_from_frame(&f, DEFAULT_TOL).unwrap()).unwrap();
        let grouped = born_probabilities(&rho, &povm_from_frame_grouped(&f, &partition, DEFAULT_TOL).unwrap()).unwrap();
        for (g, block) in grouped.iter().zip(&partition) {
            let s: f64 = block.iter().map(|&j| flat[j]).sum();
            assert!((g - s).abs() < 1e-12);
        }
    }

    #[test]
    fn effects_are_closed_under_complement_and_match_energy() {
        let mut rng = seeded(10);
        for _ in 0..20 {
            let f = random_parseval_with(&mut rng, 3, 6, Field::Complex).unwrap();
            let p = povm_from_frame(&f, DEFAULT_TOL).unwrap();
            for (e, x) in p.effects().iter().zip(f.vectors()) {
                assert!(Effect::new(e.complement().into_matrix(), 1e-10).is_ok());
                let y = sphere_point(&mut rng, 3, Field::Complex);
                let lhs = e.matrix().quadratic_form(&y).unwrap();
                assert!((lhs - c(y.inner(x).norm_sqr())).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::new(Matrix::identity(2), DEFAULT_TOL).is_err());
        assert!(DensityOperator::new(Matrix::from_diag(&[1.5, -0.5]), DEFAULT_TOL).is_err());
        let rho = random_density(&mut seeded(1), 4, Field::Real);
        assert!(DensityOperator::new(rho.matrix().clone(), DEFAULT_TOL).is_ok());
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn generalized_measure_from_density_passes() {
        let rho = random_density(&mut seeded(21), 2, Field::Complex);
        let v = |e: &Matrix| rho.expectation(e).re;
        let rep = check_generalized_measure(&v, 2, Field::Complex, 4, 50, 3, 1e-9, Mode::Sequential).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.witness.is_none());
    }

    #[test]
    fn generalized_measure_failures() {
        let d = 2;
        let squared = |e: &Matrix| {
            let t = trace(e).unwrap().re;
            t * t / (d * d) as f64
        };
        let rep = check_generalized_measure(&squared, d, Field::Complex, 4, 20, 0, 1e-9, Mode::Sequential).unwrap();
        assert!(!rep.passed);
        assert!(rep.unit_deviation < 1e-15);
        let witness = rep.witness.expect("additivity witness");
        let s: f64 = witness.effects().iter().map(|e| squared(e.matrix())).sum();
        assert!((s - 1.0).abs() > 1e-3);
        assert_eq!(witness.len(), 4);

        let zero = |_: &Matrix| 0.0;
        let rep = check_generalized_measure(&zero, d, Field::Complex, 4, 5, 0, 1e-9, Mode::Sequential).unwrap();
        assert!(!rep.passed && (rep.unit_deviation - 1.0).abs() < 1e-15);

        assert!(matches!(
            check_generalized_measure(&zero, 3, Field::Real, 4, 5, 0, 1e-9, Mode::Sequential),
            Err(PovmError::BadFamilySize { n: 4, min: 5 })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let rho = random_density(&mut seeded(2), 3, Field::Complex);
        let v = |e: &Matrix| rho.expectation(e).re;
        let a = check_generalized_measure(&v, 3, Field::Complex, 5, 30, 9, 1e-9, Mode::Sequential).unwrap();
        let b = check_generalized_measure(&v, 3, Field::Complex, 5, 30, 9, 1e-9, Mode::Parallel).unwrap();
        assert_eq!(a.max_additivity_deviation, b.max_additivity_deviation);
        assert_eq!(a.max_range_violation, b.max_range_violation);
    }
}
