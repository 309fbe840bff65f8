//! Gleason functions: functions on the closed unit ball of `K^d` whose sum
//! over every orthonormal basis (or every `N`-element Parseval frame) is a
//! fixed weight `W`.
//!
//! Quadratic forms `x -> <A x, x>` are Gleason functions of weight `tr(A)` for
//! every class. The remaining constructors build the known separating
//! examples: circle functions in `R^2` that are Gleason for bases but not
//! quadratic, a radial function that is Gleason for bases only, and a
//! one-dimensional function that is Gleason of degree 2 but not 3.
//!
//! Circle-defined functions are extended to the ball by `g(r u) = r^2 g(u)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{run_trials, Mode};
use crate::frames::{
    harmonic_frame, project_frame, random_onb_with, random_parseval_with, standard_onb, with_zeros, Frame, FrameError,
};
use crate::linalg::{outer, scalar_serde, trace, Field, LinalgError, Matrix, Vector, C64, DEFAULT_TOL};
use crate::rng::{ball_point, random_phase, seeded, trial_rng};

/// Residual above which a fit is classified as not quadratic.
pub const NOT_QUADRATIC_RESIDUAL: f64 = 1e-6;
/// Residual at or below which a fit is classified as quadratic.
pub const QUADRATIC_RESIDUAL: f64 = 1e-9;
/// Number of ball points used to measure a fit residual.
pub const FIT_SAMPLES: usize = 500;
/// `|x|^2` within this distance of a breakpoint of [`epsilon_1d_counterexample`]
/// counts as equal to it.
pub const NORM_SNAP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GleasonError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("real field requires a real symmetric matrix")]
    NotSymmetric,
    #[error("n = {0} is not 2 mod 4")]
    BadN(i64),
    #[error("weight {weight} is below sup f = {sup}")]
    BadWeight { weight: f64, sup: f64 },
    #[error("epsilon {0} is outside (0, 1/3)")]
    BadEpsilon(f64),
    #[error("sum of |alpha_i|^2 is {0}, expected 1")]
    BadAlphas(f64),
    #[error("bad rational {num}/{den}")]
    BadRational { num: u64, den: u64 },
    #[error("point has norm {0}, outside the closed unit ball")]
    OutOfBall(f64),
    #[error("bad cardinality: N = {n}, d = {d}")]
    BadCardinality { n: usize, d: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("field mismatch")]
    FieldMismatch,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Angle on the circle. `Exact` is `pi * num / den + offset` radians; the
/// angle is a rational multiple of `pi` exactly when `offset == 0`, since
/// `pi` is transcendental.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Exact { num: i64, den: u64, offset: i64 },
    Float(f64),
}

impl Angle {
    pub fn rational(num: i64, den: u64) -> Angle {
        Angle::Exact { num, den, offset: 0 }
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Angle::Exact { num, den, offset } => PI * (num as f64 / den as f64) + offset as f64,
            Angle::Float(t) => t,
        }
    }

    pub fn quarter_turn(&self) -> Angle {
        match *self {
            Angle::Exact { num, den, offset } => Angle::Exact {
                num: 2 * num + den as i64,
                den: 2 * den,
                offset,
            },
            Angle::Float(t) => Angle::Float(t + FRAC_PI_2),
        }
    }

    /// `Some(true)` when the angle is a rational multiple of `pi`; `None` when
    /// that cannot be decided exactly.
    pub fn is_rational_multiple_of_pi(&self) -> Option<bool> {
        match *self {
            Angle::Exact { offset, .. } => Some(offset == 0),
            Angle::Float(_) => None,
        }
    }

    /// Quadrant index in `0..4` of the angle reduced to `[0, 2 pi)`.
    pub fn quadrant(&self) -> u8 {
        match *self {
            Angle::Exact { num, den, offset: 0 } => {
                // floor(2 num / den) mod 4
                let q = (2 * num as i128).div_euclid(den as i128);
                q.rem_euclid(4) as u8
            }
            _ => {
                let t = self.radians().rem_euclid(TAU);
                ((t / FRAC_PI_2).floor() as i64).rem_euclid(4) as u8
            }
        }
    }

    pub fn unit_vector(&self) -> Vector {
        let t = self.radians();
        Vector::real(&[t.cos(), t.sin()])
    }
}

/// Classifies a float angle as a rational multiple of `pi` when `theta / pi`
/// is within `1e-12` of a fraction with denominator at most 64. Exact probes
/// should use [`Angle::Exact`] instead; this exists so circle functions stay
/// total on float vectors.
fn float_angle_class(theta: f64) -> Angle {
    let t = theta / PI;
    for den in 1..=64u64 {
        let num = (t * den as f64).round();
        if (t - num / den as f64).abs() <= 1e-12 {
            return Angle::rational(num as i64, den);
        }
    }
    Angle::Float(theta)
}

pub type CircleProfile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type EffectMeasure = Arc<dyn Fn(&Matrix) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&Vector) -> C64 + Send + Sync>;

#[derive(Clone)]
pub enum GleasonKind {
    /// `<A x, x>`.
    Quadratic(Matrix),
    /// `g(x) = c` everywhere.
    Constant(C64),
    /// `1 + cos(n theta)` on the circle.
    Cos2D(i64),
    /// 0/1 indicator of rational multiples of `pi` on the first quadrant,
    /// flipped on the second, repeated with period `pi`.
    RationalIndicator2D,
    /// `f` on quadrants I and III, `W - f` on II and IV.
    PeriodicExtension2D {
        profile: CircleProfile,
        sup: f64,
        weight: f64,
    },
    /// `|x|^2` except at the two squared norms `eps` and `1 - eps`, which swap values.
    Epsilon1D(f64),
    /// `exp(|x|^2) - 1`.
    ExpNorm,
    /// `x -> v(x x*)`.
    FromEffectMeasure(EffectMeasure),
    /// `sum_i alpha_i g_i`.
    Combination(Vec<(C64, GleasonFn)>),
    Custom(VectorFn),
}

impl fmt::Debug for GleasonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GleasonKind::Quadratic(a) => f.debug_tuple("Quadratic").field(a).finish(),
            GleasonKind::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            GleasonKind::Cos2D(n) => f.debug_tuple("Cos2D").field(n).finish(),
            GleasonKind::RationalIndicator2D => f.write_str("RationalIndicator2D"),
            GleasonKind::PeriodicExtension2D { sup, weight, .. } => f
                .debug_struct("PeriodicExtension2D")
                .field("sup", sup)
                .field("weight", weight)
                .finish_non_exhaustive(),
            GleasonKind::Epsilon1D(e) => f.debug_tuple("Epsilon1D").field(e).finish(),
            GleasonKind::ExpNorm => f.write_str("ExpNorm"),
            GleasonKind::FromEffectMeasure(_) => f.write_str("FromEffectMeasure(..)"),
            GleasonKind::Combination(terms) => f.debug_tuple("Combination").field(terms).finish(),
            GleasonKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A function on the closed unit ball of `K^d` together with a declared bound
/// `|g(x)| <= bound`.
#[derive(Debug, Clone)]
pub struct GleasonFn {
    dim: usize,
    field: Field,
    kind: GleasonKind,
    bound: f64,
}

impl GleasonFn {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &GleasonKind {
        &self.kind
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, x: &Vector) -> C64 {
        debug_assert_eq!(x.dim(), self.dim);
        match &self.kind {
            GleasonKind::Quadratic(a) => a.quadratic_form(x).expect("dimension checked"),
            GleasonKind::Constant(c) => *c,
            GleasonKind::Cos2D(_) | GleasonKind::RationalIndicator2D | GleasonKind::PeriodicExtension2D { .. } => {
                let r2 = x.norm_sqr();
                if r2 == 0.0 {
                    return C64::new(0.0, 0.0);
                }
                let theta = x[1].re.atan2(x[0].re).rem_euclid(TAU);
                C64::new(r2 * self.circle_value(&float_angle_class(theta)), 0.0)
            }
            GleasonKind::Epsilon1D(eps) => {
                let n2 = x.norm_sqr();
                let v = if (n2 - eps).abs() <= NORM_SNAP {
                    1.0 - eps
                } else if (n2 - (1.0 - eps)).abs() <= NORM_SNAP {
                    *eps
                } else {
                    n2
                };
                C64::new(v, 0.0)
            }
            GleasonKind::ExpNorm => C64::new(x.norm_sqr().exp() - 1.0, 0.0),
            GleasonKind::FromEffectMeasure(v) => C64::new(v(&outer(x, x).expect("same vector")), 0.0),
            GleasonKind::Combination(terms) => terms.iter().map(|(a, g)| a * g.eval(x)).sum(),
            GleasonKind::Custom(f) => f(x),
        }
    }

    /// Value at the unit vector with the given angle (`d = 2`, real field).
    pub fn eval_angle(&self, angle: &Angle) -> C64 {
        match &self.kind {
            GleasonKind::Cos2D(_) | GleasonKind::RationalIndicator2D | GleasonKind::PeriodicExtension2D { .. } => {
                C64::new(self.circle_value(angle), 0.0)
            }
            _ => self.eval(&angle.unit_vector()),
        }
    }

    fn circle_value(&self, angle: &Angle) -> f64 {
        match &self.kind {
            GleasonKind::Cos2D(n) => 1.0 + (*n as f64 * angle.radians()).cos(),
            GleasonKind::RationalIndicator2D => {
                // Without an exact class the float angle is treated as irrational.
                let base = if angle.is_rational_multiple_of_pi() == Some(true) {
                    1.0
                } else {
                    0.0
                };
                if angle.quadrant().is_multiple_of(2) {
                    base
                } else {
                    1.0 - base
                }
            }
            GleasonKind::PeriodicExtension2D { profile, weight, .. } => {
                let f = profile(angle.radians());
                if angle.quadrant().is_multiple_of(2) {
                    f
                } else {
                    weight - f
                }
            }
            _ => unreachable!("not a circle function"),
        }
    }

    pub fn at_zero(&self) -> C64 {
        self.eval(&Vector::zeros(self.dim, self.field))
    }

    pub fn sum_over(&self, frame: &Frame) -> C64 {
        frame.vectors().iter().map(|x| self.eval(x)).sum()
    }

    /// Squared norms at which the function is known to behave specially; the
    /// Parseval verifier builds frames with these norms.
    pub fn probe_norms(&self) -> Vec<f64> {
        match &self.kind {
            GleasonKind::Epsilon1D(eps) => vec![*eps, 1.0 - eps],
            GleasonKind::Combination(terms) => terms.iter().flat_map(|(_, g)| g.probe_norms()).collect(),
            _ => Vec::new(),
        }
    }

    fn needs_exact_angles(&self) -> bool {
        match &self.kind {
            GleasonKind::RationalIndicator2D => true,
            GleasonKind::Combination(t) => t.iter().any(|(_, g)| g.needs_exact_angles()),
            _ => false,
        }
    }
}

/// `x -> <A x, x>`, a Gleason function of weight `tr(A)` for every frame class.
pub fn quadratic_gleason(a: Matrix, field: Field) -> Result<GleasonFn, GleasonError> {
    if !a.is_square() {
        return Err(GleasonError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if field == Field::Real && !(a.is_real(0.0) && a.is_hermitian(DEFAULT_TOL)) {
        return Err(GleasonError::NotSymmetric);
    }
    Ok(GleasonFn {
        dim: a.rows(),
        field,
        bound: a.frobenius(),
        kind: GleasonKind::Quadratic(a),
    })
}

pub fn constant_gleason(dim: usize, field: Field, c: C64) -> GleasonFn {
    GleasonFn {
        dim,
        field,
        bound: c.norm(),
        kind: GleasonKind::Constant(c),
    }
}

/// `sum_i alpha_i g_i` over functions sharing dimension and field.
pub fn combine(terms: Vec<(C64, GleasonFn)>) -> Result<GleasonFn, GleasonError> {
    let first = terms.first().ok_or(GleasonError::DimMismatch { left: 0, right: 0 })?;
    let (dim, field) = (first.1.dim, first.1.field);
    for (_, g) in &terms {
        if g.dim != dim {
            return Err(GleasonError::DimMismatch {
                left: dim,
                right: g.dim,
            });
        }
        if g.field != field {
            return Err(GleasonError::FieldMismatch);
        }
    }
    let bound = terms.iter().map(|(a, g)| a.norm() * g.bound).sum();
    Ok(GleasonFn {
        dim,
        field,
        bound,
        kind: GleasonKind::Combination(terms),
    })
}

/// `g + c`.
pub fn shifted(g: GleasonFn, c: f64) -> GleasonFn {
    let k = constant_gleason(g.dim, g.field, C64::new(c, 0.0));
    combine(vec![(C64::new(1.0, 0.0), g), (C64::new(1.0, 0.0), k)]).expect("same dim and field")
}

pub fn custom_gleason(dim: usize, field: Field, bound: f64, f: VectorFn) -> GleasonFn {
    GleasonFn {
        dim,
        field,
        bound,
        kind: GleasonKind::Custom(f),
    }
}

/// `g(theta) = 1 + cos(n theta)` on the circle, `n = 2 mod 4`. Weight 2 for
/// the bases of `R^2`; a quadratic form only when `|n| = 2`.
pub fn cos_counterexample(n: i64) -> Result<GleasonFn, GleasonError> {
    if n.rem_euclid(4) != 2 {
        return Err(GleasonError::BadN(n));
    }
    Ok(GleasonFn {
        dim: 2,
        field: Field::Real,
        bound: 2.0,
        kind: GleasonKind::Cos2D(n),
    })
}

pub fn rational_indicator_counterexample() -> GleasonFn {
    GleasonFn {
        dim: 2,
        field: Field::Real,
        bound: 1.0,
        kind: GleasonKind::RationalIndicator2D,
    }
}

/// `f` on quadrants I and III and `W - f` on II and IV, for a bounded,
/// non-negative, `pi/2`-periodic `f` with `sup f <= W`. Weight `W` for the
/// bases of `R^2`.
pub fn periodic_extension_gleason(profile: CircleProfile, sup: f64, weight: f64) -> Result<GleasonFn, GleasonError> {
    if weight < sup {
        return Err(GleasonError::BadWeight { weight, sup });
    }
    Ok(GleasonFn {
        dim: 2,
        field: Field::Real,
        bound: weight,
        kind: GleasonKind::PeriodicExtension2D { profile, sup, weight },
    })
}

/// Gleason of degree 2 and weight 1 on `K^1`, but of no degree `N >= 3`.
pub fn epsilon_1d_counterexample(eps: f64, field: Field) -> Result<GleasonFn, GleasonError> {
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(GleasonError::BadEpsilon(eps));
    }
    Ok(GleasonFn {
        dim: 1,
        field,
        bound: 1.0,
        kind: GleasonKind::Epsilon1D(eps),
    })
}

/// `exp(|x|^2) - 1`: constant on the sphere, so Gleason of weight `d (e - 1)`
/// for bases, but not for Parseval frames with `N > d`.
pub fn exp_norm(dim: usize, field: Field) -> GleasonFn {
    GleasonFn {
        dim,
        field,
        bound: std::f64::consts::E - 1.0,
        kind: GleasonKind::ExpNorm,
    }
}

/// `g_v(x) = v(x x*)`.
pub fn gleason_from_effect_measure(v: EffectMeasure, dim: usize, field: Field, bound: f64) -> GleasonFn {
    GleasonFn {
        dim,
        field,
        bound,
        kind: GleasonKind::FromEffectMeasure(v),
    }
}

// ---- verification ----

#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub mode: Mode,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            trials: 200,
            seed: 0,
            tol: DEFAULT_TOL,
            mode: Mode::Sequential,
        }
    }
}

impl Sampling {
    pub fn new(trials: usize, seed: u64, tol: f64) -> Self {
        Sampling {
            trials,
            seed,
            tol,
            mode: Mode::Sequential,
        }
    }
}

/// A frame that was summed over, with its label and sum.
#[derive(Debug, Clone, Serialize)]
pub struct Specimen {
    pub label: String,
    pub frame: Frame,
    #[serde(with = "scalar_serde")]
    pub sum: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub low: Specimen,
    pub high: Specimen,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// `None` for orthonormal bases, `Some(N)` for `N`-element Parseval frames.
    pub degree: Option<usize>,
    pub trials: usize,
    #[serde(with = "scalar_serde")]
    pub mean_weight: C64,
    /// Largest distance between two observed sums.
    pub max_deviation: f64,
    pub passed: bool,
    /// The two most distant specimens, present when verification fails.
    pub witness: Option<Witness>,
    pub seed: u64,
    pub mode: Mode,
}

fn summarize(specimens: Vec<Specimen>, degree: Option<usize>, s: &Sampling) -> VerificationReport {
    let n = specimens.len();
    let mean = specimens.iter().map(|sp| sp.sum).sum::<C64>() / n as f64;
    // Extreme points in each coordinate; exact diameter for real-valued sums.
    let pick = |key: &dyn Fn(&C64) -> f64, max: bool| -> usize {
        let mut best = 0;
        for (i, sp) in specimens.iter().enumerate() {
            let (a, b) = (key(&sp.sum), key(&specimens[best].sum));
            if (max && a > b) || (!max && a < b) {
                best = i;
            }
        }
        best
    };
    let candidates = [
        pick(&|z| z.re, false),
        pick(&|z| z.re, true),
        pick(&|z| z.im, false),
        pick(&|z| z.im, true),
    ];
    let (mut lo, mut hi, mut dev) = (candidates[0], candidates[0], 0.0_f64);
    for &a in &candidates {
        for &b in &candidates {
            let dd = (specimens[a].sum - specimens[b].sum).norm();
            if dd > dev {
                dev = dd;
                (lo, hi) = if specimens[a].sum.re <= specimens[b].sum.re {
                    (a, b)
                } else {
                    (b, a)
                };
            }
        }
    }
    let passed = dev <= s.tol;
    let witness = (!passed).then(|| Witness {
        low: specimens[lo].clone(),
        high: specimens[hi].clone(),
    });
    VerificationReport {
        degree,
        trials: n,
        mean_weight: mean,
        max_deviation: dev,
        passed,
        witness,
        seed: s.seed,
        mode: s.mode,
    }
}

fn specimen(g: &GleasonFn, label: impl Into<String>, frame: Frame) -> Specimen {
    Specimen {
        label: label.into(),
        sum: g.sum_over(&frame),
        frame,
    }
}

fn random_exact_angle<R: Rng + ?Sized>(rng: &mut R, trial: usize) -> Angle {
    let den = rng.gen_range(1..=48u64);
    let num = rng.gen_range(0..(2 * den) as i64);
    // alternate rational multiples of pi with irrational offsets
    let offset = if trial.is_multiple_of(2) {
        0
    } else {
        rng.gen_range(1..=3)
    };
    Angle::Exact { num, den, offset }
}

fn rotation_frame(angle: &Angle) -> Frame {
    let u = angle.unit_vector();
    let v = angle.quarter_turn().unit_vector();
    Frame::new(2, Field::Real, vec![u, v]).expect("2 vectors in R^2")
}

/// Samples random orthonormal bases and compares the sums `sum_j g(x_j)`.
///
/// In `R^2` the bases are rotations `{(cos t, sin t), (-sin t, cos t)}` with
/// `t` uniform; for the rational-angle indicator `t` is drawn as an exact
/// rational multiple of `pi`, or such a multiple plus an integer number of
/// radians.
pub fn verify_onb_gleason(g: &GleasonFn, s: &Sampling) -> VerificationReport {
    let d = g.dim;
    let circle = d == 2 && g.field == Field::Real;
    let specimens = run_trials(s.trials.max(1), s.mode, |t| {
        let mut rng = trial_rng(s.seed, t as u64);
        if circle {
            let angle = if g.needs_exact_angles() {
                random_exact_angle(&mut rng, t)
            } else {
                Angle::Float(rng.gen_range(0.0..TAU))
            };
            let sum = g.eval_angle(&angle) + g.eval_angle(&angle.quarter_turn());
            Specimen {
                label: format!("rotation basis at {:.17} rad", angle.radians()),
                frame: rotation_frame(&angle),
                sum,
            }
        } else {
            specimen(g, "random orthonormal basis", random_onb_with(&mut rng, d, g.field))
        }
    });
    summarize(specimens, None, s)
}

/// Parseval frames with prescribed squared norms along `e_1`: `count` copies
/// of `sqrt(a) e_1`, one `sqrt(1 - count a) e_1`, then `e_2..e_d`, then zeros.
fn probe_norm_frames(g: &GleasonFn, n: usize) -> Vec<(String, Frame)> {
    let d = g.dim;
    let mut out = Vec::new();
    for a in g.probe_norms() {
        if !(a > 0.0 && a <= 1.0) {
            continue;
        }
        let mut count = 1;
        while count as f64 * a <= 1.0 + 1e-15 && count + d <= n {
            let rest = (1.0 - count as f64 * a).max(0.0);
            let e1 = Vector::basis(d, 0, g.field);
            let mut vectors: Vec<Vector> = (0..count).map(|_| e1.scale_real(a.sqrt())).collect();
            vectors.push(e1.scale_real(rest.sqrt()));
            vectors.extend((1..d).map(|k| Vector::basis(d, k, g.field)));
            vectors.resize(n, Vector::zeros(d, g.field));
            let frame = Frame::new(d, g.field, vectors).expect("valid shape");
            out.push((format!("{count} x squared norm {a} along e1"), frame));
            count += 1;
        }
    }
    out
}

/// Structured `N`-element Parseval frames: padded bases, an equal-norm frame,
/// a projected basis and the probe-norm frames of `g`.
fn structured_specimens(g: &GleasonFn, n: usize, seed: u64) -> Result<Vec<(String, Frame)>, GleasonError> {
    let d = g.dim;
    let mut rng = seeded(seed ^ 0x5eed_f4a3_e5a1_u64);
    let mut out = vec![(
        "standard basis padded with zeros".to_string(),
        with_zeros(&standard_onb(d, g.field), n - d),
    )];
    out.push((
        "random basis padded with zeros".into(),
        with_zeros(&random_onb_with(&mut rng, d, g.field), n - d),
    ));
    match g.field {
        Field::Complex => {
            let selector: Vec<usize> = (1..=d).collect();
            out.push(("harmonic frame".into(), harmonic_frame(d, n, &selector)?));
        }
        Field::Real if d == 2 && n >= 3 => {
            let c = (2.0 / n as f64).sqrt();
            let vectors = (0..n)
                .map(|m| {
                    let t = TAU * m as f64 / n as f64;
                    Vector::real(&[c * t.cos(), c * t.sin()])
                })
                .collect();
            out.push(("equally spaced real frame".into(), Frame::new(2, Field::Real, vectors)?));
        }
        Field::Real if d == 1 => {
            let c = (1.0 / n as f64).sqrt();
            let vectors = (0..n).map(|_| Vector::real(&[c])).collect();
            out.push(("equal-norm frame".into(), Frame::new(1, Field::Real, vectors)?));
        }
        Field::Real => {}
    }
    let big = random_onb_with(&mut rng, n, g.field);
    let sub = random_onb_with(&mut rng, n, g.field);
    out.push((
        "basis projected onto a random subspace".into(),
        project_frame(&big, &sub.vectors()[..d], 1e-8)?,
    ));
    out.extend(probe_norm_frames(g, n));
    Ok(out)
}

/// Compares `sum_j g(x_j)` across structured and random `N`-element Parseval
/// frames. `s.trials` random frames are drawn in addition to the structured
/// specimens.
pub fn verify_parseval_gleason(g: &GleasonFn, n: usize, s: &Sampling) -> Result<VerificationReport, GleasonError> {
    let d = g.dim;
    if n < d || d == 0 {
        return Err(GleasonError::BadCardinality { n, d });
    }
    let mut specimens: Vec<Specimen> = structured_specimens(g, n, s.seed)?
        .into_iter()
        .map(|(label, frame)| specimen(g, label, frame))
        .collect();
    let random = run_trials(s.trials, s.mode, |t| -> Result<Specimen, GleasonError> {
        let mut rng = trial_rng(s.seed, t as u64);
        let f = random_parseval_with(&mut rng, d, n, g.field)?;
        // random unimodular phases keep the frame Parseval
        let vectors = f
            .vectors()
            .iter()
            .map(|x| x.scale(random_phase(&mut rng, g.field)).with_field(g.field))
            .collect();
        Ok(specimen(g, "random Parseval frame", Frame::new(d, g.field, vectors)?))
    });
    for r in random {
        specimens.push(r?);
    }
    Ok(summarize(specimens, Some(n), s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitClass {
    Quadratic,
    Indeterminate,
    NotQuadratic,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub operator: Matrix,
    /// `max |g(x) - <A x, x>|` over the residual sample.
    pub residual: f64,
    #[serde(with = "scalar_serde")]
    pub weight: C64,
    pub classification: FitClass,
    /// Whether every sampled value respected the declared bound.
    pub bound_respected: bool,
    pub samples: usize,
    pub seed: u64,
}

/// Real polarization on the probes `e_k`, `(e_j + e_k)/sqrt2` and, over `C`,
/// `(e_j + i e_k)/sqrt2`, assuming the values come from a Hermitian form.
fn polarize_hermitian(d: usize, field: Field, value: &dyn Fn(&Vector) -> f64) -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let diag: Vec<f64> = (0..d).map(|k| value(&Vector::basis(d, k, field))).collect();
    let mut a = Matrix::from_diag(&diag);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut e = vec![C64::new(0.0, 0.0); d];
            e[j] = C64::new(h, 0.0);
            e[k] = C64::new(h, 0.0);
            let re = (2.0 * value(&Vector::new(e.clone(), field)) - diag[j] - diag[k]) / 2.0;
            let im = match field {
                Field::Real => 0.0,
                Field::Complex => {
                    e[k] = C64::new(0.0, h);
                    (diag[j] + diag[k] - 2.0 * value(&Vector::complex(e))) / 2.0
                }
            };
            a[(j, k)] = C64::new(re, im);
            a[(k, j)] = C64::new(re, -im);
        }
    }
    a
}

/// Recovers the operator of a quadratic form by polarization on probe points
/// inside the ball, then measures how far `g` is from that form.
///
/// A complex-valued `g` is split as `Re g + i Im g`; each part gives a
/// Hermitian operator and `A = B + i C`. Real-valued `g` therefore always
/// yields a Hermitian `A`.
pub fn fit_quadratic(g: &GleasonFn, seed: u64) -> FitResult {
    let d = g.dim;
    let b = polarize_hermitian(d, g.field, &|x| g.eval(x).re);
    let c = polarize_hermitian(d, g.field, &|x| g.eval(x).im);
    let a = if c.max_abs() == 0.0 {
        b
    } else {
        b.add(&c.scale(C64::new(0.0, 1.0))).expect("same shape")
    };
    let mut rng = seeded(seed);
    let mut residual = 0.0_f64;
    let mut bound_respected = true;
    for _ in 0..FIT_SAMPLES {
        let x = ball_point(&mut rng, d, g.field);
        let gx = g.eval(&x);
        bound_respected &= gx.norm() <= g.bound * (1.0 + 1e-12) + 1e-12;
        residual = residual.max((gx - a.quadratic_form(&x).expect("same dim")).norm());
    }
    let classification = if residual <= QUADRATIC_RESIDUAL {
        FitClass::Quadratic
    } else if residual > NOT_QUADRATIC_RESIDUAL {
        FitClass::NotQuadratic
    } else {
        FitClass::Indeterminate
    };
    FitResult {
        weight: trace(&a).expect("square"),
        operator: a,
        residual,
        classification,
        bound_respected,
        samples: FIT_SAMPLES,
        seed,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingWitness {
    pub x: Vector,
    #[serde(with = "scalar_serde")]
    pub alpha: C64,
    /// `g(alpha x)`.
    #[serde(with = "scalar_serde")]
    pub scaled_value: C64,
    /// `|alpha|^2 g(x)`.
    #[serde(with = "scalar_serde")]
    pub homogeneous_value: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneityReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub passed: bool,
    pub witness: Option<ScalingWitness>,
    pub seed: u64,
}

/// Largest `|g(alpha x) - |alpha|^2 g(x)|` over sampled `|x| <= 1`, `|alpha| <= 1`.
/// The first sample is always `x = e_1`, `alpha = 1/2`.
pub fn homogeneity_check(g: &GleasonFn, samples: usize, seed: u64, tol: f64) -> HomogeneityReport {
    let d = g.dim;
    let mut rng = seeded(seed);
    let mut worst: Option<(f64, ScalingWitness)> = None;
    for i in 0..samples.max(1) {
        let (x, alpha) = if i == 0 {
            (Vector::basis(d, 0, g.field), C64::new(0.5, 0.0))
        } else {
            let x = ball_point(&mut rng, d, g.field);
            let alpha = match g.field {
                Field::Real => C64::new(rng.gen_range(-1.0..=1.0), 0.0),
                Field::Complex => C64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..TAU)),
            };
            (x, alpha)
        };
        let scaled_value = g.eval(&x.scale(alpha).with_field(g.field));
        let homogeneous_value = g.eval(&x) * alpha.norm_sqr();
        let dev = (scaled_value - homogeneous_value).norm();
        if worst.as_ref().is_none_or(|(w, _)| dev > *w) {
            worst = Some((
                dev,
                ScalingWitness {
                    x,
                    alpha,
                    scaled_value,
                    homogeneous_value,
                },
            ));
        }
    }
    let (max_deviation, witness) = worst.expect("at least one sample");
    let passed = max_deviation <= tol;
    HomogeneityReport {
        samples: samples.max(1),
        max_deviation,
        passed,
        witness: (!passed).then_some(witness),
        seed,
    }
}

fn check_in_ball(x: &Vector, tol: f64) -> Result<(), GleasonError> {
    let n = x.norm();
    if n > 1.0 + tol {
        return Err(GleasonError::OutOfBall(n));
    }
    Ok(())
}

/// `sum_i g(alpha_i x) = g(x)` whenever `sum |alpha_i|^2 = 1`.
pub fn partition_scaling_check(g: &GleasonFn, x: &Vector, alphas: &[C64], tol: f64) -> Result<bool, GleasonError> {
    if x.dim() != g.dim {
        return Err(GleasonError::DimMismatch {
            left: g.dim,
            right: x.dim(),
        });
    }
    check_in_ball(x, tol)?;
    let total: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
    if (total - 1.0).abs() > tol {
        return Err(GleasonError::BadAlphas(total));
    }
    let lhs: C64 = alphas.iter().map(|&a| g.eval(&x.scale(a).with_field(g.field))).sum();
    Ok((lhs - g.eval(x)).norm() <= tol)
}

/// `g(sqrt(q) x) = q g(x)` for rational `q = num / den >= 0`.
pub fn rational_scaling_check(g: &GleasonFn, x: &Vector, num: u64, den: u64, tol: f64) -> Result<bool, GleasonError> {
    if den == 0 {
        return Err(GleasonError::BadRational { num, den });
    }
    if x.dim() != g.dim {
        return Err(GleasonError::DimMismatch {
            left: g.dim,
            right: x.dim(),
        });
    }
    let q = num as f64 / den as f64;
    let y = x.scale_real(q.sqrt());
    check_in_ball(&y, tol)?;
    Ok((g.eval(&y) - g.eval(x) * q).norm() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroCount {
    Finite(u32),
    Infinite,
}

impl Serialize for ZeroCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ZeroCount::Finite(n) => s.serialize_u32(*n),
            ZeroCount::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Number of zeros of `Q(x, y) = a x^2 + b x y + c y^2` on the unit circle.
///
/// On the circle `Q = a cos^2 + b cos sin + c sin^2`. Where `cos != 0` the zeros
/// are the roots of `a + b t + c t^2` in `t = tan`, each giving two antipodal
/// points; `(0, +-1)` are zeros exactly when `c = 0`.
pub fn quadratic_zero_count_s1(a: f64, b: f64, c: f64) -> ZeroCount {
    if a == 0.0 && b == 0.0 && c == 0.0 {
        return ZeroCount::Infinite;
    }
    if c != 0.0 {
        let disc = b * b - 4.0 * a * c;
        return ZeroCount::Finite(if disc > 0.0 {
            4
        } else if disc == 0.0 {
            2
        } else {
            0
        });
    }
    // c = 0: (0, +-1) plus the root of a + b t when b != 0
    ZeroCount::Finite(if b != 0.0 { 4 } else { 2 })
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeResult {
    pub degree: usize,
    pub passed: bool,
    #[serde(with = "scalar_serde")]
    pub weight: C64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightStep {
    pub from: usize,
    pub to: usize,
    #[serde(with = "scalar_serde")]
    pub increment: C64,
    #[serde(with = "scalar_serde")]
    pub expected: C64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderReport {
    pub degrees: Vec<DegreeResult>,
    /// Weight increments between consecutive degrees that both verified.
    pub steps: Vec<WeightStep>,
    #[serde(with = "scalar_serde")]
    pub value_at_zero: C64,
    pub passed: bool,
    pub seed: u64,
}

/// Verifies `g` at each degree in `n0..=n1` and checks that the weights
/// satisfy `W_{N+1} = W_N + g(0)` wherever consecutive degrees both verify.
pub fn degree_ladder_experiment(
    g: &GleasonFn,
    n0: usize,
    n1: usize,
    s: &Sampling,
) -> Result<LadderReport, GleasonError> {
    let d = g.dim;
    if n0 < d + 2 || n1 < n0 {
        return Err(GleasonError::BadCardinality { n: n0, d });
    }
    let g0 = g.at_zero();
    let mut degrees = Vec::new();
    for n in n0..=n1 {
        let r = verify_parseval_gleason(g, n, s)?;
        degrees.push(DegreeResult {
            degree: n,
            passed: r.passed,
            weight: r.mean_weight,
            max_deviation: r.max_deviation,
        });
    }
    let steps: Vec<WeightStep> = degrees
        .windows(2)
        .filter(|w| w[0].passed && w[1].passed)
        .map(|w| {
            let increment = w[1].weight - w[0].weight;
            WeightStep {
                from: w[0].degree,
                to: w[1].degree,
                increment,
                expected: g0,
                ok: (increment - g0).norm() <= s.tol,
            }
        })
        .collect();
    let passed = degrees.iter().all(|r| r.passed) && steps.iter().all(|st| st.ok);
    Ok(LadderReport {
        degrees,
        steps,
        value_at_zero: g0,
        passed,
        seed: s.seed,
    })
}

/// JSON description of a Gleason function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GleasonSpec {
    Quadratic {
        #[serde(rename = "A")]
        a: Matrix,
        #[serde(default)]
        field: Field,
    },
    QuadraticPlusConst {
        #[serde(rename = "A")]
        a: Matrix,
        c: f64,
        #[serde(default)]
        field: Field,
    },
    Cos2d {
        n: i64,
    },
    Epsilon1d {
        eps: f64,
        #[serde(default)]
        field: Field,
    },
    Expnorm {
        dim: usize,
        #[serde(default)]
        field: Field,
    },
    RationalIndicator,
    /// Periodic extension of `sin^2(2 theta)` (sup 1) with weight `W`.
    PeriodicSin2 {
        weight: f64,
    },
}

impl GleasonSpec {
    pub fn build(&self) -> Result<GleasonFn, GleasonError> {
        match self {
            GleasonSpec::Quadratic { a, field } => quadratic_gleason(a.clone(), *field),
            GleasonSpec::QuadraticPlusConst { a, c, field } => Ok(shifted(quadratic_gleason(a.clone(), *field)?, *c)),
            GleasonSpec::Cos2d { n } => cos_counterexample(*n),
            GleasonSpec::Epsilon1d { eps, field } => epsilon_1d_counterexample(*eps, *field),
            GleasonSpec::Expnorm { dim, field } => {
                if *dim == 0 {
                    return Err(GleasonError::BadCardinality { n: 0, d: 0 });
                }
                Ok(exp_norm(*dim, *field))
            }
            GleasonSpec::RationalIndicator => Ok(rational_indicator_counterexample()),
            GleasonSpec::PeriodicSin2 { weight } => {
                periodic_extension_gleason(Arc::new(|t: f64| (2.0 * t).sin().powi(2)), 1.0, *weight)
            }
        }
    }
}
