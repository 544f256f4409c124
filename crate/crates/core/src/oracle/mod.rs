//! Independent numerical checks of the closed forms.
//!
//! The divergence is estimated straight from its definition as a double
//! integral: draw `x₀ ~ μ`, integrate `f(φ₁(x₀)) − f(φ_t(x₀))` over `t ∈ [0, 1]`
//! by Gauss–Legendre quadrature, and average. The flow `φ_t` is either the
//! closed-form affine map or a classical RK4 integration of `ẋ = A x + b`,
//! the latter sharing no algebra with the closed-form time integral.

mod quadrature;

use rayon::prelude::*;

pub use quadrature::QuadratureRule;

use crate::error::{check_dim, Error, Result};
use crate::gaussian::{blocks, stats, Gaussian, SampleStats, Sampler, DEFAULT_BLOCK_SIZE};
use crate::matrix::{max_abs_vec, sub_vec};
use crate::scalar::Scalar;
use crate::transport::{solve_potential, AffineMap, QuadraticPotential};

pub const DEFAULT_QUAD_NODES: usize = 16;
pub const DEFAULT_RK4_STEPS: usize = 200;

/// How `φ_t` is evaluated inside the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlowImpl {
    #[default]
    ClosedForm,
    Rk4 {
        steps: usize,
    },
}

/// Classical fourth-order Runge–Kutta for `ẋ = A x + b` on `[0, t_end]`.
pub fn rk4_flow<T: Scalar>(
    p: &QuadraticPotential<T>,
    x0: &[T],
    t_end: T,
    steps: usize,
) -> Result<Vec<T>> {
    check_dim("rk4_flow", p.dim(), x0.len())?;
    if steps == 0 {
        return Err(Error::InvalidInput("rk4_flow needs steps >= 1".into()));
    }
    Ok(rk4_unchecked(p, x0, t_end, steps))
}

fn rk4_unchecked<T: Scalar>(p: &QuadraticPotential<T>, x0: &[T], t_end: T, steps: usize) -> Vec<T> {
    let h = t_end / T::lit(steps as f64);
    let half = T::lit(0.5);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let axpy = |x: &[T], s: T, d: &[T]| -> Vec<T> {
        x.iter().zip(d).map(|(&xi, &di)| xi + s * di).collect()
    };
    let mut x = x0.to_vec();
    for _ in 0..steps {
        let k1 = p.gradient_unchecked(&x);
        let k2 = p.gradient_unchecked(&axpy(&x, half * h, &k1));
        let k3 = p.gradient_unchecked(&axpy(&x, half * h, &k2));
        let k4 = p.gradient_unchecked(&axpy(&x, h, &k3));
        for i in 0..x.len() {
            x[i] = x[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
    }
    x
}

/// Quadrature of the inner time integral with a reusable evaluation plan.
struct InnerIntegrand<'a, T> {
    potential: &'a QuadraticPotential<T>,
    rule: &'a QuadratureRule<T>,
    flow: FlowImpl,
    // closed-form maps at t = 1 and at every node
    maps: Option<(AffineMap<T>, Vec<AffineMap<T>>)>,
}

impl<'a, T: Scalar> InnerIntegrand<'a, T> {
    fn new(
        potential: &'a QuadraticPotential<T>,
        rule: &'a QuadratureRule<T>,
        flow: FlowImpl,
    ) -> Result<Self> {
        if let FlowImpl::Rk4 { steps: 0 } = flow {
            return Err(Error::InvalidInput("rk4 flow needs steps >= 1".into()));
        }
        let maps = match flow {
            FlowImpl::ClosedForm => Some((
                potential.flow_map(T::one()),
                rule.nodes()
                    .iter()
                    .map(|&t| potential.flow_map(t))
                    .collect(),
            )),
            FlowImpl::Rk4 { .. } => None,
        };
        Ok(Self {
            potential,
            rule,
            flow,
            maps,
        })
    }

    fn eval(&self, x0: &[T]) -> T {
        let f = |x: &[T]| self.potential.value_unchecked(x);
        match (&self.maps, self.flow) {
            (Some((end, at_nodes)), _) => {
                let f1 = f(&end.apply(x0));
                at_nodes
                    .iter()
                    .zip(self.rule.weights())
                    .map(|(map, &w)| w * (f1 - f(&map.apply(x0))))
                    .sum()
            }
            (None, FlowImpl::Rk4 { steps }) => {
                let f1 = f(&rk4_unchecked(self.potential, x0, T::one(), steps));
                self.rule
                    .nodes()
                    .iter()
                    .zip(self.rule.weights())
                    .map(|(&t, &w)| {
                        // keep the step length uniform across nodes
                        let n = ((t.to_f64_lossy() * steps as f64).ceil() as usize).max(1);
                        w * (f1 - f(&rk4_unchecked(self.potential, x0, t, n)))
                    })
                    .sum()
            }
            (None, FlowImpl::ClosedForm) => unreachable!("closed-form maps are always precomputed"),
        }
    }
}

/// `Σᵢ wᵢ [f(φ₁(x₀)) − f(φ_{tᵢ}(x₀))]`.
pub fn inner_integral_quad<T: Scalar>(
    p: &QuadraticPotential<T>,
    x0: &[T],
    rule: &QuadratureRule<T>,
    flow: FlowImpl,
) -> Result<T> {
    check_dim("inner_integral_quad", p.dim(), x0.len())?;
    Ok(InnerIntegrand::new(p, rule, flow)?.eval(x0))
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    /// Sample standard deviation over `√N`.
    pub stderr: T,
    pub n_samples: usize,
    pub seed: u64,
}

/// Knobs for [`mc_wkl_with`]. Results are identical for identical
/// `(seed, n_samples, block_size)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub flow: FlowImpl,
    pub quad_nodes: usize,
    pub block_size: usize,
}

impl McConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            flow: FlowImpl::ClosedForm,
            quad_nodes: DEFAULT_QUAD_NODES,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }

    pub fn flow(mut self, flow: FlowImpl) -> Self {
        self.flow = flow;
        self
    }

    pub fn quad_nodes(mut self, k: usize) -> Self {
        self.quad_nodes = k;
        self
    }

    pub fn block_size(mut self, size: usize) -> Self {
        self.block_size = size;
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    count: usize,
    mean: T,
    m2: T,
}

impl<T: Scalar> Moments<T> {
    fn empty() -> Self {
        Self {
            count: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    fn push(&mut self, x: T) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::lit(self.count as f64);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let (na, nb, nn) = (
            T::lit(self.count as f64),
            T::lit(other.count as f64),
            T::lit(n as f64),
        );
        let delta = other.mean - self.mean;
        Self {
            count: n,
            mean: self.mean + delta * nb / nn,
            m2: self.m2 + other.m2 + delta * delta * na * nb / nn,
        }
    }
}

/// Estimates the divergence from its defining double integral.
pub fn mc_wkl<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
    n_samples: usize,
    seed: u64,
    flow: FlowImpl,
) -> Result<McEstimate<T>> {
    mc_wkl_with(mu, nu, &McConfig::new(n_samples, seed).flow(flow))
}

pub fn mc_wkl_with<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
    cfg: &McConfig,
) -> Result<McEstimate<T>> {
    if cfg.n_samples < 100 {
        return Err(Error::InvalidInput(format!(
            "mc_wkl needs at least 100 samples, got {}",
            cfg.n_samples
        )));
    }
    let solution = solve_potential(mu, nu)?;
    let rule = QuadratureRule::gauss_legendre(cfg.quad_nodes)?;
    let integrand = InnerIntegrand::new(&solution.potential, &rule, cfg.flow)?;
    let sampler = Sampler::new(mu)?;

    let partial: Vec<Moments<T>> = blocks(cfg.n_samples, cfg.block_size)
        .map(|(b, len)| {
            let mut acc = Moments::empty();
            for x0 in sampler.draw_block(cfg.seed, b, len) {
                acc.push(integrand.eval(&x0));
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(Moments::empty(), Moments::merge);

    let n = T::lit(total.count as f64);
    let variance = total.m2 / (n - T::one());
    Ok(McEstimate {
        mean: total.mean,
        stderr: (variance.max(T::zero()) / n).sqrt(),
        n_samples: total.count,
        seed: cfg.seed,
    })
}

/// Empirical check that the time-one flow pushes `μ` onto `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardReport<T> {
    pub stats: SampleStats<T>,
    /// `‖emp_mean − μ₁‖_∞`
    pub mean_error: T,
    /// `5 √(max diag Σ₁ / N)`
    pub mean_bound: T,
    /// `‖emp_cov − Σ₁‖_F`
    pub cov_error: T,
    /// `5 ‖Σ₁‖_F √(2 (n + 1) / N)`
    pub cov_bound: T,
    pub passed: bool,
}

pub fn pushforward_check<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
    n_samples: usize,
    seed: u64,
) -> Result<PushforwardReport<T>> {
    pushforward_check_with(mu, nu, n_samples, seed, DEFAULT_BLOCK_SIZE)
}

pub fn pushforward_check_with<T: Scalar>(
    mu: &Gaussian<T>,
    nu: &Gaussian<T>,
    n_samples: usize,
    seed: u64,
    block_size: usize,
) -> Result<PushforwardReport<T>> {
    if n_samples < 1000 {
        return Err(Error::InvalidInput(format!(
            "pushforward_check needs at least 1000 samples, got {n_samples}"
        )));
    }
    let solution = solve_potential(mu, nu)?;
    let map = solution.potential.flow_map(T::one());
    let sampler = Sampler::new(mu)?;
    let images: Vec<Vec<T>> = blocks(n_samples, block_size)
        .map(|(b, len)| {
            sampler
                .draw_block(seed, b, len)
                .into_iter()
                .map(|x| map.apply(&x))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let stats = stats(&images)?;

    let n = T::lit(n_samples as f64);
    let dim = T::lit(nu.dim() as f64);
    let five = T::lit(5.0);
    let cov1 = nu.cov();
    let max_diag = (0..nu.dim()).fold(T::zero(), |m, i| m.max(cov1[(i, i)]));

    let mean_error = max_abs_vec(&sub_vec(&stats.emp_mean, nu.mean()));
    let mean_bound = five * (max_diag / n).sqrt();
    let cov_error = stats.emp_cov.sub(cov1).matrix().frobenius_norm();
    let cov_bound =
        five * cov1.matrix().frobenius_norm() * (T::lit(2.0) * (dim + T::one()) / n).sqrt();

    Ok(PushforwardReport {
        passed: mean_error <= mean_bound && cov_error <= cov_bound,
        stats,
        mean_error,
        mean_bound,
        cov_error,
        cov_bound,
    })
}
