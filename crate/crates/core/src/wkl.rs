//! Closed-form Wasserstein KL-divergence between Gaussians.
//!
//! With `R` the positive-definite solution of `R Σ₀ R = Σ₁`,
//!
//! ```text
//! D(μ‖ν) = ¼ tr((R² log R² − R² + I) Σ₀) + ¼ ‖√W (μ₁ − μ₀)‖²,   W = Q + 2 P⊥_{log R}
//! Q      = (R − I)⁺ (R² log R² − R² + I) (R − I)⁺
//! ```
//!
//! All three matrices are spectral functions of `R`. `W` is evaluated as one
//! continuous eigen-function `w(r)` so no rank decision on `log R` is needed.

use crate::error::{check_dim, Error, Result};
use crate::gaussian::Gaussian;
use crate::matrix::{sub_vec, SymMatrix};
use crate::scalar::Scalar;
use crate::symmat::stable::{m_of_ratio, q, w};
use crate::symmat::{sym_eig, RankTolerance, SpectralDecomp};
use crate::transport::transport_ratio;

/// Divergence value split into its covariance and mean contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct WklBreakdown<T> {
    pub total: T,
    pub trace_term: T,
    pub mean_term: T,
    pub r: SymMatrix<T>,
    pub q: SymMatrix<T>,
    pub w: SymMatrix<T>,
}

struct RatioSpectrum<T> {
    r: SymMatrix<T>,
    spec: SpectralDecomp<T>,
}

fn ratio_spectrum<T: Scalar>(mu: &Gaussian<T>, nu: &Gaussian<T>) -> Result<RatioSpectrum<T>> {
    check_dim("wkl", mu.dim(), nu.dim())?;
    let r = transport_ratio(mu.cov(), nu.cov())?;
    let spec = sym_eig(&r)?;
    if spec.min_eigval() <= T::zero() {
        return Err(Error::NotPositiveDefinite(
            "transport ratio lost positive definiteness".into(),
        ));
    }
    Ok(RatioSpectrum { r, spec })
}

/// `Q` with the pseudoinverse convention: eigenvalues of `R` whose distance to
/// one is classified as zero by `tol` map to zero.
fn q_matrix<T: Scalar>(spec: &SpectralDecomp<T>, tol: RankTolerance) -> SymMatrix<T> {
    let shifted: Vec<T> = spec.eigvals().iter().map(|&r| r - T::one()).collect();
    let zero = tol.zero_mask(&shifted);
    let vals: Vec<T> = spec
        .eigvals()
        .iter()
        .zip(zero)
        .map(|(&r, z)| if z { T::zero() } else { q(r) })
        .collect();
    spec.compose_with(&vals)
}

fn mean_term<T: Scalar>(spec: &SpectralDecomp<T>, delta: &[T]) -> T {
    let coords = spec.to_eigenbasis(delta);
    T::lit(0.25)
        * coords
            .iter()
            .zip(spec.eigvals())
            .map(|(&c, &r)| w(r) * c * c)
            .sum::<T>()
}

/// General closed form, valid for any pair of positive-definite covariances.
pub fn wkl_divergence<T: Scalar>(mu: &Gaussian<T>, nu: &Gaussian<T>) -> Result<WklBreakdown<T>> {
    wkl_divergence_with(mu, nu, RankTolerance::default())
}

/// [`wkl_divergence`] with an explicit rank tolerance for the reported `Q`.
pub fn wkl_divergence_with<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
    tol: RankTolerance,
) -> Result<WklBreakdown<T>> {
    let RatioSpectrum { r, spec } = ratio_spectrum(mu, nu)?;

    // tr(M Σ₀) = Σ_i m(r_i) u_iᵀ Σ₀ u_i, every summand non-negative
    let u = spec.eigvecs();
    let trace_term = T::lit(0.25)
        * spec
            .eigvals()
            .iter()
            .enumerate()
            .map(|(i, &ri)| m_of_ratio(ri) * mu.cov().quad_form(&u.column(i)))
            .sum::<T>();

    let delta = sub_vec(nu.mean(), mu.mean());
    let mean_term = mean_term(&spec, &delta);

    Ok(WklBreakdown {
        total: trace_term + mean_term,
        trace_term,
        mean_term,
        q: q_matrix(&spec, tol),
        w: spec.compose(w),
        r,
    })
}

/// Simplified form for commuting covariances, where the trace term becomes
/// `¼ ‖√Q (√Σ₁ − √Σ₀)‖²_F`.
pub fn wkl_commuting<T: Scalar>(mu: &Gaussian<T>, nu: &Gaussian<T>) -> Result<WklBreakdown<T>> {
    wkl_commuting_with(mu, nu, RankTolerance::default())
}

pub fn wkl_commuting_with<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
    tol: RankTolerance,
) -> Result<WklBreakdown<T>> {
    check_dim("wkl_commuting", mu.dim(), nu.dim())?;
    let (s0, s1) = (mu.cov().matrix(), nu.cov().matrix());
    let commutator = s0.matmul(s1).sub(&s1.matmul(s0)).frobenius_norm();
    let bound = T::lit(1e-10) * s0.frobenius_norm() * s1.frobenius_norm();
    if commutator > bound {
        return Err(Error::PreconditionViolated(format!(
            "covariances do not commute (‖Σ₀Σ₁ − Σ₁Σ₀‖_F = {commutator}); use wkl_divergence"
        )));
    }

    let RatioSpectrum { r, spec } = ratio_spectrum(mu, nu)?;
    let q_mat = q_matrix(&spec, tol);
    let sqrt_q = sym_eig(&q_mat)?.compose(|l| l.max(T::zero()).sqrt());
    let root0 = sym_eig(mu.cov())?.compose(|l| l.sqrt());
    let root1 = sym_eig(nu.cov())?.compose(|l| l.sqrt());
    let diff = root1.sub(&root0);
    let trace_term = T::lit(0.25)
        * sqrt_q
            .matrix()
            .matmul(diff.matrix())
            .frobenius_norm()
            .powi(2);

    let delta = sub_vec(nu.mean(), mu.mean());
    let mean_term = mean_term(&spec, &delta);

    Ok(WklBreakdown {
        total: trace_term + mean_term,
        trace_term,
        mean_term,
        q: q_mat,
        w: spec.compose(w),
        r,
    })
}

/// Scalar fast path for `D(N(μ₀, σ₀²) ‖ N(μ₁, σ₁²))`.
pub fn wkl_univariate<T: Scalar>(mu0: T, sigma0: T, mu1: T, sigma1: T) -> Result<T> {
    for (name, s) in [("sigma0", sigma0), ("sigma1", sigma1)] {
        if !(s > T::zero() && s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive, got {s}"
            )));
        }
    }
    if !(mu0.is_finite() && mu1.is_finite()) {
        return Err(Error::InvalidInput("means must be finite".into()));
    }
    let dmu2 = (mu1 - mu0) * (mu1 - mu0);
    let ds = sigma1 - sigma0;
    let quarter = T::lit(0.25);
    if ds.abs() <= T::lit(T::SERIES_RADIUS) * sigma0.max(sigma1) {
        return Ok(quarter * w(sigma1 / sigma0) * (ds * ds + dmu2));
    }
    let (v0, v1) = (sigma0 * sigma0, sigma1 * sigma1);
    let numer = v0 - v1 + v1 * (v1 / v0).ln();
    Ok(numer / (T::lit(4.0) * ds * ds) * (ds * ds + dmu2))
}
