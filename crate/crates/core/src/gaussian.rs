//! Multivariate normal distributions: validation, sampling, empirical
//! statistics and the classical KL-divergence.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::matrix::{sub_vec, Matrix, SymMatrix};
use crate::scalar::Scalar;
use crate::symmat::{sym_eig, SpectralDecomp};

/// Default number of draws per random substream.
pub const DEFAULT_BLOCK_SIZE: usize = 4096;

/// Relative eigenvalue floor a covariance must clear to count as positive definite.
pub const PD_REL_TOL: f64 = 1e-12;

/// `N(mean, cov)` with a positive-definite covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian<T> {
    mean: Vec<T>,
    cov: SymMatrix<T>,
}

impl<T: Scalar> Gaussian<T> {
    pub fn new(mean: Vec<T>, cov: SymMatrix<T>) -> Result<Self> {
        check_dim("gaussian covariance", mean.len(), cov.dim())?;
        if mean.is_empty() {
            return Err(Error::InvalidInput(
                "gaussian must have dimension >= 1".into(),
            ));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("mean has non-finite entries".into()));
        }
        require_pd(&cov, "covariance")?;
        Ok(Self { mean, cov })
    }

    /// `N(mean, sigma^2)` on the real line.
    pub fn univariate(mean: T, sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::NotPositiveDefinite(format!(
                "standard deviation must be positive, got {sigma}"
            )));
        }
        Self::new(vec![mean], SymMatrix::from_diag(&[sigma * sigma]))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn cov(&self) -> &SymMatrix<T> {
        &self.cov
    }
}

/// Positive-definiteness test used for every covariance in the crate:
/// `min λ > 1e-12 * max(1, max λ)`.
pub fn require_pd<T: Scalar>(s: &SymMatrix<T>, what: &str) -> Result<SpectralDecomp<T>> {
    let d = sym_eig(s)?;
    let max = d.eigvals().last().copied().unwrap_or_else(T::zero);
    let floor = T::lit(PD_REL_TOL) * max.max(T::one());
    if d.min_eigval() <= floor {
        return Err(Error::NotPositiveDefinite(format!(
            "{what}: smallest eigenvalue {} <= {}",
            d.min_eigval(),
            floor
        )));
    }
    Ok(d)
}

/// `KL(p || q) = ½ [tr(Σq⁻¹ Σp) - n + Δᵀ Σq⁻¹ Δ + ln det Σq - ln det Σp]`, `Δ = μq - μp`.
pub fn kl_divergence<T: Scalar>(p: &Gaussian<T>, q: &Gaussian<T>) -> Result<T> {
    check_dim("kl_divergence", p.dim(), q.dim())?;
    let dq = require_pd(q.cov(), "kl_divergence: q covariance")?;
    let dp = require_pd(p.cov(), "kl_divergence: p covariance")?;
    let n = p.dim();

    let u = dq.eigvecs();
    let mut trace = T::zero();
    for (k, &lam) in dq.eigvals().iter().enumerate() {
        let col = u.column(k);
        trace = trace + p.cov().quad_form(&col) / lam;
    }
    let delta = dq.to_eigenbasis(&sub_vec(q.mean(), p.mean()));
    let maha: T = delta
        .iter()
        .zip(dq.eigvals())
        .map(|(&c, &lam)| c * c / lam)
        .sum();
    let log_det_q: T = dq.eigvals().iter().map(|l| l.ln()).sum();
    let log_det_p: T = dp.eigvals().iter().map(|l| l.ln()).sum();

    let kl = T::lit(0.5) * (trace - T::lit(n as f64) + maha + log_det_q - log_det_p);
    // rounding can push an exact zero slightly negative
    Ok(kl.max(T::zero()))
}

/// Seedable, portable generator behind all sampling: ChaCha20 keyed by
/// `seed` with the block index as stream id.
pub fn substream(seed: u64, block: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Draws `mean + L z` with `L` the symmetric square root of the covariance.
#[derive(Debug, Clone)]
pub struct Sampler<T> {
    mean: Vec<T>,
    root: Matrix<T>,
}

impl<T: Scalar> Sampler<T> {
    pub fn new(g: &Gaussian<T>) -> Result<Self> {
        let d = require_pd(g.cov(), "sampler covariance")?;
        let root = d.compose(|l| l.sqrt()).into_matrix();
        Ok(Self {
            mean: g.mean().to_vec(),
            root,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn draw(&self, rng: &mut ChaCha20Rng) -> Vec<T> {
        let z: Vec<T> = (0..self.dim())
            .map(|_| T::lit(StandardNormal.sample(rng)))
            .collect();
        let lz = self.root.matvec(&z);
        self.mean.iter().zip(lz).map(|(&m, v)| m + v).collect()
    }

    /// Draws of block `block` (indices `block * block_size ..`), `len` of them.
    pub fn draw_block(&self, seed: u64, block: usize, len: usize) -> Vec<Vec<T>> {
        let mut rng = substream(seed, block as u64);
        (0..len).map(|_| self.draw(&mut rng)).collect()
    }
}

/// Splits `0..count` into consecutive blocks of at most `block_size` items.
pub fn blocks(
    count: usize,
    block_size: usize,
) -> impl IndexedParallelIterator<Item = (usize, usize)> {
    let block_size = block_size.max(1);
    let n_blocks = count.div_ceil(block_size);
    (0..n_blocks)
        .into_par_iter()
        .map(move |b| (b, block_size.min(count - b * block_size)))
}

/// `count` i.i.d. draws from `g`, deterministic in `(seed, count, dim)`.
pub fn sample<T: Scalar>(g: &Gaussian<T>, count: usize, seed: u64) -> Result<Vec<Vec<T>>> {
    sample_with_block_size(g, count, seed, DEFAULT_BLOCK_SIZE)
}

pub fn sample_with_block_size<T: Scalar>(
    g: &Gaussian<T>,
    count: usize,
    seed: u64,
    block_size: usize,
) -> Result<Vec<Vec<T>>> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be >= 1".into()));
    }
    let sampler = Sampler::new(g)?;
    let chunks: Vec<Vec<Vec<T>>> = blocks(count, block_size)
        .map(|(b, len)| sampler.draw_block(seed, b, len))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Unbiased empirical mean and covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats<T> {
    pub n_samples: usize,
    pub emp_mean: Vec<T>,
    pub emp_cov: SymMatrix<T>,
}

pub fn stats<T: Scalar>(samples: &[Vec<T>]) -> Result<SampleStats<T>> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let n = samples[0].len();
    if samples.iter().any(|s| s.len() != n) {
        return Err(Error::InvalidInput("samples have unequal dimension".into()));
    }
    let count = T::lit(samples.len() as f64);
    let mut mean = vec![T::zero(); n];
    for s in samples {
        for (m, &v) in mean.iter_mut().zip(s) {
            *m = *m + v;
        }
    }
    mean.iter_mut().for_each(|m| *m = *m / count);

    let mut cov = Matrix::<T>::zeros(n, n);
    for s in samples {
        let c = sub_vec(s, &mean);
        for i in 0..n {
            for j in i..n {
                cov[(i, j)] = cov[(i, j)] + c[i] * c[j];
            }
        }
    }
    let denom = count - T::one();
    let cov = Matrix::from_fn(n, n, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        cov[(a, b)] / denom
    });
    Ok(SampleStats {
        n_samples: samples.len(),
        emp_mean: mean,
        emp_cov: SymMatrix::symmetrize(cov),
    })
}

/// JSON shape `{"mean": [..], "cov": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianRepr<T> {
    pub mean: Vec<T>,
    pub cov: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<GaussianRepr<T>> for Gaussian<T> {
    type Error = Error;

    fn try_from(r: GaussianRepr<T>) -> Result<Self> {
        if r.cov.len() != r.mean.len() {
            return Err(Error::InvalidInput(format!(
                "covariance has {} rows but mean has length {}",
                r.cov.len(),
                r.mean.len()
            )));
        }
        let cov = SymMatrix::from_rows_checked(&r.cov)?;
        Gaussian::new(r.mean, cov)
    }
}

impl<T: Scalar> From<&Gaussian<T>> for GaussianRepr<T> {
    fn from(g: &Gaussian<T>) -> Self {
        Self {
            mean: g.mean.clone(),
            cov: g.cov.matrix().to_rows(),
        }
    }
}

impl<T: Scalar + Serialize> Serialize for Gaussian<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaussianRepr::from(self).serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Gaussian<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GaussianRepr::<T>::deserialize(d)?;
        Gaussian::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Squared Mahalanobis-style norm `‖Σ^{-1/2} x‖²`.
pub fn whitened_norm_sq<T: Scalar>(cov: &SymMatrix<T>, x: &[T]) -> Result<T> {
    let d = require_pd(cov, "whitening covariance")?;
    let c = d.to_eigenbasis(x);
    Ok(c.iter().zip(d.eigvals()).map(|(&v, &l)| v * v / l).sum())
}
