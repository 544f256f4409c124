#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use wkl_core::random::{random_orthogonal, random_spd};
use wkl_core::{Gaussian, Matrix, SymMatrix};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Gaussian with mean uniform in `[-mean_box, mean_box]ⁿ` and covariance
/// eigenvalues uniform in `[lo, hi]`.
pub fn gaussian(rng: &mut impl Rng, n: usize, mean_box: f64, lo: f64, hi: f64) -> Gaussian<f64> {
    let mean = uniform_vec(rng, n, -mean_box, mean_box);
    Gaussian::new(mean, random_spd(rng, n, lo, hi).unwrap()).unwrap()
}

/// Pair of Gaussians whose covariances share a random eigenbasis.
pub fn commuting_pair(rng: &mut impl Rng, n: usize) -> (Gaussian<f64>, Gaussian<f64>) {
    let q: Matrix<f64> = random_orthogonal(rng, n);
    let mut cov = || {
        let d = uniform_vec(rng, n, 0.1, 10.0);
        SymMatrix::from_diag(&d).congruence(&q.transpose())
    };
    let (c0, c1) = (cov(), cov());
    let m0 = uniform_vec(rng, n, -3.0, 3.0);
    let m1 = uniform_vec(rng, n, -3.0, 3.0);
    (
        Gaussian::new(m0, c0).unwrap(),
        Gaussian::new(m1, c1).unwrap(),
    )
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
