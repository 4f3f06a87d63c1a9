use crate::{Matrix, Vector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used for all sampling.
pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(rng: &mut Rng64) -> f64 {
    rng.random_range(-1.0..1.0)
}

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix(rng: &mut Rng64, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| C64::new(unit(rng), unit(rng)))
}

/// Real entries uniform in `[-1, 1)`.
pub fn random_real_matrix(rng: &mut Rng64, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| C64::new(unit(rng), 0.0))
}

pub fn random_vector(rng: &mut Rng64, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| C64::new(unit(rng), unit(rng)))
}
