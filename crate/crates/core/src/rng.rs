//! Seeded sampling. Every random object in the crate is a deterministic
//! function of a `u64` seed; independent trials draw from separate ChaCha
//! streams of the same seed so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Field, Matrix, Vector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard Gaussian scalar in the given field (complex: unit total variance).
pub fn gaussian_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> C64 {
    match field {
        Field::Real => C64::new(gaussian(rng), 0.0),
        Field::Complex => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            C64::new(s * gaussian(rng), s * gaussian(rng))
        }
    }
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field) -> Vector {
    Vector::new((0..dim).map(|_| gaussian_scalar(rng, field)).collect(), field)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, field: Field) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian_scalar(rng, field);
        }
    }
    m
}

/// Random Hermitian (real symmetric for `R`) matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field) -> Matrix {
    gaussian_matrix(rng, dim, dim, field).hermitian_part()
}

/// Unit-modulus scalar; `±1` over `R`.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R, field: Field) -> C64 {
    match field {
        Field::Real => {
            if rng.gen::<bool>() {
                C64::new(1.0, 0.0)
            } else {
                C64::new(-1.0, 0.0)
            }
        }
        Field::Complex => C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
    }
}

/// Uniform point of the closed unit ball in `K^dim`.
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field) -> Vector {
    let v = gaussian_vector(rng, dim, field);
    let real_dim = match field {
        Field::Real => dim,
        Field::Complex => 2 * dim,
    } as f64;
    let radius: f64 = rng.gen::<f64>().powf(1.0 / real_dim);
    let n = v.norm();
    if n == 0.0 {
        return Vector::zeros(dim, field);
    }
    v.scale_real(radius / n)
}

/// Uniform point of the unit sphere in `K^dim`.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field) -> Vector {
    loop {
        let v = gaussian_vector(rng, dim, field);
        let n = v.norm();
        if n > 1e-8 {
            return v.scale_real(1.0 / n);
        }
    }
}
