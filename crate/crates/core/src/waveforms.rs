//! CAZAC sequences, discrete periodic ambiguity functions and Gabor frames.
//!
//! The ambiguity function of `u: Z/dZ -> C` is
//! `A(u)(m, n) = (1/d) sum_k u(m + k) conj(u(k)) e^{-2 pi i k n / d}`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{Frame, FrameError};
use crate::linalg::{scalars_serde, Field, Vector, C64};

/// Tolerance for `|u(k)| = 1`.
pub const CA_TOL: f64 = 1e-12;

/// Sums above this length use compensated summation.
const KAHAN_THRESHOLD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveformError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is too small, need p >= 5")]
    TooSmall(u64),
    #[error("entry {index} has modulus {modulus}, expected 1")]
    NotUnimodular { index: usize, modulus: f64 },
    #[error("sequence is empty")]
    Empty,
    #[error("declared length {length} but {entries} entries")]
    BadLength { length: usize, entries: usize },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceRepr")]
pub struct Sequence {
    length: usize,
    #[serde(with = "scalars_serde")]
    entries: Vec<C64>,
}

#[derive(Deserialize)]
struct SequenceRepr {
    length: usize,
    #[serde(with = "scalars_serde")]
    entries: Vec<C64>,
}

impl TryFrom<SequenceRepr> for Sequence {
    type Error = WaveformError;

    fn try_from(r: SequenceRepr) -> Result<Self, Self::Error> {
        if r.length != r.entries.len() {
            return Err(WaveformError::BadLength {
                length: r.length,
                entries: r.entries.len(),
            });
        }
        Sequence::new(r.entries)
    }
}

impl Sequence {
    pub fn new(entries: Vec<C64>) -> Result<Self, WaveformError> {
        if entries.is_empty() {
            return Err(WaveformError::Empty);
        }
        Ok(Sequence {
            length: entries.len(),
            entries,
        })
    }

    pub fn constant(d: usize) -> Result<Self, WaveformError> {
        Sequence::new(vec![C64::new(1.0, 0.0); d])
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// `u(k)` with `k` taken mod `d`.
    pub fn at(&self, k: i64) -> C64 {
        self.entries[k.rem_euclid(self.length as i64) as usize]
    }

    /// `(M_n u)(k) = e^{2 pi i k n / d} u(k)`.
    pub fn modulate(&self, n: i64) -> Sequence {
        let roots = roots_of_unity(self.length, 1.0);
        let d = self.length as i64;
        let entries = (0..d)
            .map(|k| roots[((k * n).rem_euclid(d)) as usize] * self.entries[k as usize])
            .collect();
        Sequence {
            length: self.length,
            entries,
        }
    }

    /// `(T_m u)(k) = u(k - m)`.
    pub fn translate(&self, m: i64) -> Sequence {
        let entries = (0..self.length as i64).map(|k| self.at(k - m)).collect();
        Sequence {
            length: self.length,
            entries,
        }
    }

    pub fn max_modulus_deviation(&self) -> (usize, f64) {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, z)| (k, (z.norm() - 1.0).abs()))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best })
    }
}

/// `e^{sign 2 pi i j / d}` for `j = 0..d`.
fn roots_of_unity(d: usize, sign: f64) -> Vec<C64> {
    (0..d)
        .map(|j| C64::from_polar(1.0, sign * TAU * j as f64 / d as f64))
        .collect()
}

/// Neumaier-compensated complex sum.
fn compensated_sum(terms: impl Iterator<Item = C64>) -> C64 {
    fn step(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }
    let (mut re, mut cre, mut im, mut cim) = (0.0, 0.0, 0.0, 0.0);
    for z in terms {
        step(&mut re, &mut cre, z.re);
        step(&mut im, &mut cim, z.im);
    }
    C64::new(re + cre, im + cim)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbiguityTable {
    pub dim: usize,
    /// Row-major: entry `m * d + n` is `A(u)(m, n)`.
    #[serde(with = "scalars_serde")]
    pub values: Vec<C64>,
}

impl AmbiguityTable {
    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.values[m * self.dim + n]
    }

    pub fn magnitude(&self, m: usize, n: usize) -> f64 {
        self.get(m, n).norm()
    }

    /// `max |A(m, n)|` over `(m, n) != (0, 0)`.
    pub fn max_off_origin(&self) -> f64 {
        self.values.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Magnitude grid, row `m`, column `n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in 0..self.dim {
            for n in 0..self.dim {
                if n > 0 {
                    out.push(',');
                }
                write!(out, "{:.16e}", self.magnitude(m, n)).expect("write to string");
            }
            out.push('\n');
        }
        out
    }
}

pub fn ambiguity(u: &Sequence) -> AmbiguityTable {
    let d = u.len();
    let roots = roots_of_unity(d, -1.0);
    let mut values = Vec::with_capacity(d * d);
    for m in 0..d {
        let lag: Vec<C64> = (0..d).map(|k| u.entries[(m + k) % d] * u.entries[k].conj()).collect();
        for n in 0..d {
            let terms = (0..d).map(|k| lag[k] * roots[(k * n) % d]);
            let s = if d > KAHAN_THRESHOLD {
                compensated_sum(terms)
            } else {
                terms.sum()
            };
            values.push(s / d as f64);
        }
    }
    AmbiguityTable { dim: d, values }
}

/// `(1/d) sum_k u(m + k) conj(u(k))`.
pub fn autocorrelation(u: &Sequence, m: usize) -> C64 {
    let d = u.len();
    let terms = (0..d).map(|k| u.entries[(m + k) % d] * u.entries[k].conj());
    let s = if d > KAHAN_THRESHOLD {
        compensated_sum(terms)
    } else {
        terms.sum()
    };
    s / d as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CazacReport {
    pub length: usize,
    /// `max_k ||u(k)| - 1|`.
    pub ca_deviation: f64,
    /// Largest autocorrelation magnitude at a nonzero shift.
    pub zac_residual: f64,
    pub constant_amplitude: bool,
    pub zero_autocorrelation: bool,
    pub passed: bool,
}

/// Checks `|u(k)| = 1` within [`CA_TOL`] and zero autocorrelation within `tol`.
pub fn is_cazac(u: &Sequence, tol: f64) -> CazacReport {
    let ca_deviation = u.max_modulus_deviation().1;
    let zac_residual = (1..u.len()).map(|m| autocorrelation(u, m).norm()).fold(0.0, f64::max);
    let constant_amplitude = ca_deviation <= CA_TOL;
    let zero_autocorrelation = zac_residual <= tol;
    CazacReport {
        length: u.len(),
        ca_deviation,
        zac_residual,
        constant_amplitude,
        zero_autocorrelation,
        passed: constant_amplitude && zero_autocorrelation,
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let (mut b, mut acc) = ((base % p) as u128, 1u128);
    let p = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Legendre symbol `(k | p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(k: u64, p: u64) -> i8 {
    match mod_pow(k, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Björck's CAZAC sequence of prime length `p >= 5`.
///
/// `u(k) = e^{i theta(k)}` with `theta(k) = (k|p) arccos(1 / (1 + sqrt p))` for
/// `p = 1 mod 4`, and `theta(k) = arccos((1 - p) / (1 + p))` on the quadratic
/// non-residues (0 elsewhere) for `p = 3 mod 4`.
pub fn bjorck(p: u64) -> Result<Sequence, WaveformError> {
    if p < 5 {
        return Err(WaveformError::TooSmall(p));
    }
    if !is_prime(p) {
        return Err(WaveformError::NotPrime(p));
    }
    let pf = p as f64;
    let entries = (0..p)
        .map(|k| {
            let l = legendre(k, p);
            let theta = if p % 4 == 1 {
                l as f64 * (1.0 / (1.0 + pf.sqrt())).acos()
            } else if l == -1 {
                ((1.0 - pf) / (1.0 + pf)).acos()
            } else {
                0.0
            };
            C64::from_polar(1.0, theta)
        })
        .collect();
    Sequence::new(entries)
}

/// The theorem's ambiguity bound for Björck sequences of prime length `p`.
pub fn bjorck_ambiguity_bound(p: u64) -> f64 {
    let pf = p as f64;
    if p % 4 == 1 {
        2.0 / pf.sqrt() + 4.0 / pf
    } else {
        2.0 / pf.sqrt() + 4.0 / pf.powf(1.5)
    }
}

/// `u(k) = e^{pi i k (k + 1) / d}` for odd `d`.
pub fn quadratic_phase(d: usize) -> Result<Sequence, WaveformError> {
    if d == 0 {
        return Err(WaveformError::Empty);
    }
    let entries = (0..d as u64)
        .map(|k| {
            // k(k+1) mod 2d keeps the phase argument small
            let e = (k * (k + 1)) % (2 * d as u64);
            C64::from_polar(1.0, PI * e as f64 / d as f64)
        })
        .collect();
    Sequence::new(entries)
}

/// The `d^2` vectors `(T_m M_n u) / sqrt d`, ordered by `m` then `n`.
///
/// Unit-norm and tight with frame constant `d`. With this ordering
/// `<u_{m,n}, u_{0,0}> = conj(A(u)(m, n))`, so the coherence is the largest
/// off-origin ambiguity magnitude.
pub fn gabor_frame(u: &Sequence) -> Result<Frame, WaveformError> {
    let (index, dev) = u.max_modulus_deviation();
    if dev > CA_TOL {
        return Err(WaveformError::NotUnimodular {
            index,
            modulus: u.entries[index].norm(),
        });
    }
    let d = u.len();
    let scale = 1.0 / (d as f64).sqrt();
    let mut vectors = Vec::with_capacity(d * d);
    for m in 0..d as i64 {
        for n in 0..d as i64 {
            let v = u.modulate(n).translate(m);
            vectors.push(Vector::complex(v.entries).scale_real(scale));
        }
    }
    Ok(Frame::new(d, Field::Complex, vectors)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaborReport {
    pub length: usize,
    pub coherence: f64,
    /// `1 / sqrt(d + 1)`.
    pub lower: f64,
    /// `3 / sqrt(d)`.
    pub upper: f64,
    pub within: bool,
}

/// Gabor coherence read off the ambiguity table, against `[1/sqrt(d+1), 3/sqrt d]`.
pub fn gabor_coherence(u: &Sequence) -> GaborReport {
    let d = u.len() as f64;
    let coherence = ambiguity(u).max_off_origin();
    let (lower, upper) = (1.0 / (d + 1.0).sqrt(), 3.0 / d.sqrt());
    GaborReport {
        length: u.len(),
        coherence,
        lower,
        upper,
        within: lower <= coherence && coherence <= upper,
    }
}
