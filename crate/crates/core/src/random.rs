//! Random test objects: symmetric matrices, rotations, covariances, Gaussians.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::matrix::{Matrix, SymMatrix};
use crate::scalar::Scalar;
use crate::symmat::sym_eig;

fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(StandardNormal.sample(rng))
}

/// Symmetric matrix with i.i.d. `N(0, scale²)` entries on and above the diagonal.
pub fn random_symmetric<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    scale: T,
) -> SymMatrix<T> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = scale * normal::<T, _>(rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::symmetrize(m)
}

/// Orthogonal matrix taken from the eigenvectors of a random symmetric matrix.
pub fn random_orthogonal<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    let s = random_symmetric(rng, n, T::one());
    sym_eig(&s).expect("finite random matrix").eigvecs().clone()
}

/// `Q diag(λ) Qᵀ` with `λ` uniform in `[lo, hi]` and `Q` random orthogonal.
pub fn random_spd<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    lo: T,
    hi: T,
) -> Result<SymMatrix<T>> {
    if !(lo > T::zero() && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "eigenvalue range must satisfy 0 < lo <= hi < inf, got [{lo}, {hi}]"
        )));
    }
    let lambdas: Vec<T> = (0..n)
        .map(|_| lo + (hi - lo) * T::lit(rng.random::<f64>()))
        .collect();
    let q = random_orthogonal::<T, _>(rng, n);
    Ok(SymMatrix::from_diag(&lambdas).congruence(&q.transpose()))
}

/// Gaussian with `N(0, mean_scale²)` mean entries and a [`random_spd`] covariance.
pub fn random_gaussian<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    mean_scale: T,
    lo: T,
    hi: T,
) -> Result<Gaussian<T>> {
    let mean = (0..n).map(|_| mean_scale * normal::<T, _>(rng)).collect();
    Gaussian::new(mean, random_spd(rng, n, lo, hi)?)
}
