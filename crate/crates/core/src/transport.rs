//! Quadratic transport potentials and their gradient flows.
//!
//! For `f(x) = ½ xᵀA x + bᵀx` the gradient flow `ẋ = A x + b` is affine and
//! solved in closed form. Between two Gaussians there is exactly one such
//! potential whose time-one flow pushes the first onto the second:
//! `A = log R` with `R` the positive-definite solution of `R Σ₀ R = Σ₁`, and
//! `b` chosen so that the means line up.

use crate::error::{check_dim, Error, Result};
use crate::gaussian::{require_pd, Gaussian};
use crate::matrix::{dot, norm, sub_vec, Matrix, SymMatrix};
use crate::scalar::Scalar;
use crate::symmat::stable::{k, m, m1, m2};
use crate::symmat::{sym_eig, SpectralDecomp};

/// `f(x) = ½ xᵀA x + bᵀx` with symmetric `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPotential<T> {
    a: SymMatrix<T>,
    b: Vec<T>,
    spectrum: SpectralDecomp<T>,
}

/// `x ↦ linear · x + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<T> {
    pub linear: Matrix<T>,
    pub offset: Vec<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.linear
            .matvec(x)
            .into_iter()
            .zip(&self.offset)
            .map(|(v, &o)| v + o)
            .collect()
    }
}

/// Precomputed quadratic form of the inner time integral:
/// `¼ x₀ᵀ M x₀ + ½ x₀ᵀ (m1(A) b) + ¼ bᵀ m2(A) b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeIntegralForm<T> {
    pub m: SymMatrix<T>,
    pub m1_b: Vec<T>,
    pub constant: T,
}

impl<T: Scalar> TimeIntegralForm<T> {
    pub fn eval(&self, x0: &[T]) -> T {
        let quarter = T::lit(0.25);
        let half = T::lit(0.5);
        quarter * self.m.quad_form(x0) + half * dot(x0, &self.m1_b) + self.constant
    }
}

impl<T: Scalar> QuadraticPotential<T> {
    pub fn new(a: SymMatrix<T>, b: Vec<T>) -> Result<Self> {
        check_dim("potential", a.dim(), b.len())?;
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("b has non-finite entries".into()));
        }
        let spectrum = sym_eig(&a)?;
        Ok(Self { a, b, spectrum })
    }

    fn from_spectrum(spectrum: SpectralDecomp<T>, b: Vec<T>) -> Self {
        let a = spectrum.compose(|l| l);
        Self { a, b, spectrum }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &SymMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn spectrum(&self) -> &SpectralDecomp<T> {
        &self.spectrum
    }

    /// `f(x)`.
    pub fn value(&self, x: &[T]) -> Result<T> {
        check_dim("potential value", self.dim(), x.len())?;
        Ok(self.value_unchecked(x))
    }

    pub(crate) fn value_unchecked(&self, x: &[T]) -> T {
        T::lit(0.5) * self.a.quad_form(x) + dot(&self.b, x)
    }

    /// `grad f(x) = A x + b`.
    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>> {
        check_dim("potential gradient", self.dim(), x.len())?;
        Ok(self.gradient_unchecked(x))
    }

    pub(crate) fn gradient_unchecked(&self, x: &[T]) -> Vec<T> {
        self.a
            .matvec(x)
            .into_iter()
            .zip(&self.b)
            .map(|(v, &bi)| v + bi)
            .collect()
    }

    /// Time-`t` flow map `x₀ ↦ e^{At} x₀ + t Φ(At) b`, where `Φ` has
    /// eigen-function `k(a) = (e^a - 1)/a`.
    pub fn flow_map(&self, t: T) -> AffineMap<T> {
        if t == T::zero() {
            // exact identity; U Uᵀ would only be identity up to rounding
            return AffineMap {
                linear: Matrix::identity(self.dim()),
                offset: vec![T::zero(); self.dim()],
            };
        }
        let linear = self.spectrum.compose(|a| (a * t).exp()).into_matrix();
        let phi: Vec<T> = self
            .spectrum
            .eigvals()
            .iter()
            .map(|&a| t * k(a * t))
            .collect();
        let offset = self.spectrum.apply_diag(&phi, &self.b);
        AffineMap { linear, offset }
    }

    pub fn flow(&self, t: T, x0: &[T]) -> Result<Vec<T>> {
        check_dim("flow", self.dim(), x0.len())?;
        Ok(self.flow_map(t).apply(x0))
    }

    pub fn time_integral_form(&self) -> TimeIntegralForm<T> {
        let vals = self.spectrum.eigvals();
        let m_mat = self.spectrum.compose(m);
        let m1_vals: Vec<T> = vals.iter().map(|&a| m1(a)).collect();
        let m2_vals: Vec<T> = vals.iter().map(|&a| m2(a)).collect();
        let m1_b = self.spectrum.apply_diag(&m1_vals, &self.b);
        let coords = self.spectrum.to_eigenbasis(&self.b);
        let constant = T::lit(0.25)
            * coords
                .iter()
                .zip(&m2_vals)
                .map(|(&c, &g)| g * c * c)
                .sum::<T>();
        TimeIntegralForm {
            m: m_mat,
            m1_b,
            constant,
        }
    }

    /// `∫₀¹ (f∘φ₁ − f∘φ_t)(x₀) dt` in closed form.
    pub fn time_integral(&self, x0: &[T]) -> Result<T> {
        check_dim("time_integral", self.dim(), x0.len())?;
        Ok(self.time_integral_form().eval(x0))
    }
}

/// The potential transporting `mu` onto `nu`, with verification residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution<T> {
    pub potential: QuadraticPotential<T>,
    /// `e^A`, the positive-definite solution of `R Σ₀ R = Σ₁`.
    pub r: SymMatrix<T>,
    /// `‖e^A Σ₀ e^A − Σ₁‖_F / ‖Σ₁‖_F`.
    pub riccati_residual: T,
    /// `‖e^A μ₀ + K b − μ₁‖ / max(1, ‖μ₁‖)`.
    pub mean_residual: T,
}

/// `R = Σ₀^{-1/2} (Σ₀^{1/2} Σ₁ Σ₀^{1/2})^{1/2} Σ₀^{-1/2}`.
pub fn transport_ratio<T: Scalar>(
    sigma0: &SymMatrix<T>,
    sigma1: &SymMatrix<T>,
) -> Result<SymMatrix<T>> {
    check_dim("transport_ratio", sigma0.dim(), sigma1.dim())?;
    let d0 = require_pd(sigma0, "transport_ratio: Σ₀")?;
    require_pd(sigma1, "transport_ratio: Σ₁")?;
    if sigma0 == sigma1 {
        return Ok(SymMatrix::identity(sigma0.dim()));
    }
    let root = d0.compose(|l| l.sqrt());
    let inv_root = d0.compose(|l| l.sqrt().recip());
    let middle = sigma1.sandwich(&root);
    let middle_root = sym_eig(&middle)?.compose(|l| l.max(T::zero()).sqrt());
    Ok(middle_root.sandwich(&inv_root))
}

/// Solves for `A = log R` and `b = K⁻¹ (μ₁ − e^A μ₀)`, where
/// `K = (e^A − I) A⁺ + P⊥_A` has eigen-function `k(a)`.
pub fn solve_potential<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
) -> Result<TransportSolution<T>> {
    check_dim("solve_potential", mu.dim(), nu.dim())?;
    let r = transport_ratio(mu.cov(), nu.cov())?;
    let r_spec = sym_eig(&r)?;
    if r_spec.min_eigval() <= T::zero() {
        return Err(Error::NotPositiveDefinite(
            "transport ratio lost positive definiteness".into(),
        ));
    }
    let a_spec = r_spec.map_eigvals(|l| l.ln());

    let exp_a = a_spec.compose(|a| a.exp());
    let rhs = sub_vec(nu.mean(), &exp_a.matvec(mu.mean()));
    let k_vals: Vec<T> = a_spec.eigvals().iter().map(|&a| k(a)).collect();
    let inv_k: Vec<T> = k_vals.iter().map(|v| v.recip()).collect();
    let b = a_spec.apply_diag(&inv_k, &rhs);

    let pushed_cov = mu.cov().sandwich(&exp_a);
    let riccati_residual =
        pushed_cov.sub(nu.cov()).matrix().frobenius_norm() / nu.cov().matrix().frobenius_norm();
    let pushed_mean: Vec<T> = exp_a
        .matvec(mu.mean())
        .into_iter()
        .zip(a_spec.apply_diag(&k_vals, &b))
        .map(|(x, y)| x + y)
        .collect();
    let mean_residual = norm(&sub_vec(&pushed_mean, nu.mean())) / norm(nu.mean()).max(T::one());

    Ok(TransportSolution {
        potential: QuadraticPotential::from_spectrum(a_spec, b),
        r: exp_a,
        riccati_residual,
        mean_residual,
    })
}
