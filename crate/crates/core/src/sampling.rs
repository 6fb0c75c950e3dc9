//! Seeded randomness. Every sampled quantity derives its stream from
//! `(seed, index)` so sweeps are independent of scheduling.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for item `index` of a sweep seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Stream for item `index` of a sweep seeded with `seed`.
pub fn derived(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, index))
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| StandardNormal.sample(rng))
}

pub fn unit_vector(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    loop {
        let v = gaussian_vector(rng, len);
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Gaussian skew matrix, scaled so that `|K|_F^2 = dim`.
pub fn skew_matrix(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v: f64 = StandardNormal.sample(rng);
            k[(i, j)] = v;
            k[(j, i)] = -v;
        }
    }
    let f = k.norm();
    if f > 0.0 {
        k *= (dim as f64).sqrt() / f;
    }
    k
}
