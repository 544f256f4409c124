//! Spectral calculus for real symmetric matrices.
//!
//! Every matrix function used elsewhere in the crate (exponential, logarithm,
//! square root, pseudoinverse, null-space projector and the stable
//! removable-singularity functions in [`stable`]) is evaluated as
//! `U g(diag λ) U^T` on top of a cyclic Jacobi eigendecomposition.

mod jacobi;
pub mod stable;

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};
use crate::scalar::Scalar;

pub use stable::{stable_fn, StableKind};

/// Orthogonal eigenvectors (as columns of `eigvecs`) and ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp<T> {
    eigvecs: Matrix<T>,
    eigvals: Vec<T>,
}

impl<T: Scalar> SpectralDecomp<T> {
    /// Same eigenvectors, eigenvalues replaced by `g(λ)`. The result is only
    /// guaranteed ascending when `g` is monotone increasing.
    pub fn map_eigvals(&self, g: impl Fn(T) -> T) -> Self {
        Self {
            eigvecs: self.eigvecs.clone(),
            eigvals: self.eigvals.iter().map(|&l| g(l)).collect(),
        }
    }

    pub fn eigvecs(&self) -> &Matrix<T> {
        &self.eigvecs
    }

    pub fn eigvals(&self) -> &[T] {
        &self.eigvals
    }

    pub fn dim(&self) -> usize {
        self.eigvals.len()
    }

    pub fn min_eigval(&self) -> T {
        self.eigvals.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_abs_eigval(&self) -> T {
        self.eigvals.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    /// `U diag(values) U^T`, symmetrized.
    pub fn compose_with(&self, values: &[T]) -> SymMatrix<T> {
        let n = self.dim();
        debug_assert_eq!(values.len(), n);
        let u = &self.eigvecs;
        let mut out = Matrix::zeros(n, n);
        for (k, &g) in values.iter().enumerate() {
            if g == T::zero() {
                continue;
            }
            for i in 0..n {
                let uig = u[(i, k)] * g;
                for j in i..n {
                    out[(i, j)] = out[(i, j)] + uig * u[(j, k)];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        SymMatrix::symmetrize(out)
    }

    /// `U g(diag λ) U^T`.
    pub fn compose(&self, g: impl Fn(T) -> T) -> SymMatrix<T> {
        let values: Vec<T> = self.eigvals.iter().map(|&l| g(l)).collect();
        self.compose_with(&values)
    }

    /// Coordinates of `x` in the eigenbasis, `U^T x`.
    pub fn to_eigenbasis(&self, x: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|k| (0..n).map(|i| self.eigvecs[(i, k)] * x[i]).sum())
            .collect()
    }

    /// `U y` for coordinates `y` in the eigenbasis.
    pub fn from_eigenbasis(&self, y: &[T]) -> Vec<T> {
        self.eigvecs.matvec(y)
    }

    /// `U diag(values) U^T x` without forming the matrix.
    pub fn apply_diag(&self, values: &[T], x: &[T]) -> Vec<T> {
        let y: Vec<T> = self
            .to_eigenbasis(x)
            .into_iter()
            .zip(values)
            .map(|(c, &g)| c * g)
            .collect();
        self.from_eigenbasis(&y)
    }

    /// Ensures every eigenvalue is strictly positive and not classified as zero.
    pub fn require_positive_definite(&self, tol: RankTolerance, what: &str) -> Result<()> {
        let cutoff = tol.cutoff(&self.eigvals);
        match self.eigvals.iter().find(|&&l| l <= cutoff) {
            Some(&l) => Err(Error::NotPositiveDefinite(format!(
                "{what}: eigenvalue {l} is not positive"
            ))),
            None => Ok(()),
        }
    }
}

/// Relative threshold under which an eigenvalue is treated as zero:
/// `|λ| <= rel_tol * max(1, max |λ_j|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance {
    rel_tol: f64,
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self { rel_tol: 1e-12 }
    }
}

impl RankTolerance {
    pub fn new(rel_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "rank tolerance must be positive and finite, got {rel_tol}"
            )));
        }
        Ok(Self { rel_tol })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Absolute cutoff for a given spectrum.
    pub fn cutoff<T: Scalar>(&self, eigvals: &[T]) -> T {
        let scale = eigvals.iter().fold(T::one(), |m, &v| m.max(v.abs()));
        T::lit(self.rel_tol) * scale
    }

    pub fn zero_mask<T: Scalar>(&self, eigvals: &[T]) -> Vec<bool> {
        let cutoff = self.cutoff(eigvals);
        eigvals.iter().map(|l| l.abs() <= cutoff).collect()
    }
}

/// Scalar eigen-function applied by [`apply_spectral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    Exp,
    Log,
    Sqrt,
    Pinv,
    NullProj,
    Stable(StableKind),
}

impl FromStr for SpectralFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exp" => Self::Exp,
            "log" => Self::Log,
            "sqrt" => Self::Sqrt,
            "pinv" => Self::Pinv,
            "null_proj" => Self::NullProj,
            other => Self::Stable(other.parse()?),
        })
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig<T: Scalar>(s: &SymMatrix<T>) -> Result<SpectralDecomp<T>> {
    if !s.matrix().is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let (eigvals, eigvecs) = jacobi::eig(s.matrix().clone());
    Ok(SpectralDecomp { eigvecs, eigvals })
}

/// Evaluates `g(S) = U g(diag λ) U^T`.
pub fn apply_spectral<T: Scalar>(
    s: &SymMatrix<T>,
    g: SpectralFn,
    tol: RankTolerance,
) -> Result<SymMatrix<T>> {
    let d = sym_eig(s)?;
    apply_to_decomp(&d, g, tol)
}

/// Same as [`apply_spectral`] for an already decomposed matrix.
pub fn apply_to_decomp<T: Scalar>(
    d: &SpectralDecomp<T>,
    g: SpectralFn,
    tol: RankTolerance,
) -> Result<SymMatrix<T>> {
    let zero = tol.zero_mask(d.eigvals());
    let values: Vec<T> = match g {
        SpectralFn::Exp => d.eigvals().iter().map(|l| l.exp()).collect(),
        SpectralFn::Log | SpectralFn::Sqrt => {
            d.require_positive_definite(tol, if g == SpectralFn::Log { "log" } else { "sqrt" })?;
            d.eigvals()
                .iter()
                .map(|&l| {
                    if g == SpectralFn::Log {
                        l.ln()
                    } else {
                        l.sqrt()
                    }
                })
                .collect()
        }
        SpectralFn::Pinv => d
            .eigvals()
            .iter()
            .zip(&zero)
            .map(|(&l, &z)| if z { T::zero() } else { l.recip() })
            .collect(),
        SpectralFn::NullProj => zero
            .iter()
            .map(|&z| if z { T::one() } else { T::zero() })
            .collect(),
        SpectralFn::Stable(kind) => d
            .eigvals()
            .iter()
            .map(|&l| stable_fn(kind, l))
            .collect::<Result<_>>()?,
    };
    Ok(d.compose_with(&values))
}
