//! Wasserstein-flow KL-divergence between Gaussian distributions.
//!
//! The divergence measures how far the potential of the optimal transport
//! map between two Gaussians climbs along its own gradient flow. For
//! Gaussians the transport potential is quadratic, the flow is affine and the
//! divergence has a closed form built from the ratio matrix
//! `R = Σ₀^{-1/2} (Σ₀^{1/2} Σ₁ Σ₀^{1/2})^{1/2} Σ₀^{-1/2}`.
//!
//! * [`symmat`]: symmetric eigen-decomposition, spectral functions and the
//!   numerically stable scalar kernels they use.
//! * [`gaussian`]: validated Gaussians, sampling, empirical statistics, KL.
//! * [`transport`]: the quadratic potential, its flow and time integral.
//! * [`wkl`]: the closed-form divergence.
//! * [`oracle`]: Monte-Carlo and quadrature checks that avoid the closed form.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` / `*32`
//! aliases name the common instantiations.

pub mod error;
pub mod gaussian;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod symmat;
pub mod transport;
pub mod wkl;

pub use error::{Error, Result};
pub use gaussian::{kl_divergence, sample, stats, Gaussian, GaussianRepr, SampleStats};
pub use matrix::{Matrix, SymMatrix};
pub use oracle::{
    mc_wkl, pushforward_check, FlowImpl, McConfig, McEstimate, PushforwardReport, QuadratureRule,
};
pub use scalar::Scalar;
pub use symmat::{
    apply_spectral, stable_fn, sym_eig, RankTolerance, SpectralDecomp, SpectralFn, StableKind,
};
pub use transport::{
    solve_potential, transport_ratio, AffineMap, QuadraticPotential, TransportSolution,
};
pub use wkl::{wkl_commuting, wkl_divergence, wkl_univariate, WklBreakdown};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type SymMatrix64 = SymMatrix<f64>;
pub type SymMatrix32 = SymMatrix<f32>;
pub type Gaussian64 = Gaussian<f64>;
pub type Gaussian32 = Gaussian<f32>;
pub type SpectralDecomp64 = SpectralDecomp<f64>;
pub type SpectralDecomp32 = SpectralDecomp<f32>;
pub type QuadraticPotential64 = QuadraticPotential<f64>;
pub type QuadraticPotential32 = QuadraticPotential<f32>;
pub type TransportSolution64 = TransportSolution<f64>;
pub type TransportSolution32 = TransportSolution<f32>;
pub type WklBreakdown64 = WklBreakdown<f64>;
pub type WklBreakdown32 = WklBreakdown<f32>;
pub type McEstimate64 = McEstimate<f64>;
pub type McEstimate32 = McEstimate<f32>;
