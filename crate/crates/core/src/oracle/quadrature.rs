use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Quadrature rule on `[0, 1]`: nodes in the open interval, positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> QuadratureRule<T> {
    /// Validates and wraps an arbitrary rule.
    pub fn new(nodes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidInput(
                "quadrature rule needs equally many nodes and weights (>= 1)".into(),
            ));
        }
        if nodes.iter().any(|&t| !(t > T::zero() && t < T::one())) {
            return Err(Error::InvalidInput(
                "quadrature nodes must lie in (0, 1)".into(),
            ));
        }
        if weights.iter().any(|&w| !(w > T::zero())) {
            return Err(Error::InvalidInput(
                "quadrature weights must be positive".into(),
            ));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(1e-6).max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::InvalidInput(format!(
                "quadrature weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { nodes, weights })
    }

    /// `k`-point Gauss–Legendre rule mapped from `[-1, 1]` to `[0, 1]`.
    ///
    /// Nodes come from Newton iteration on `P_k` started at the Chebyshev-like
    /// guess `cos(π (i + 3/4) / (k + 1/2))`; the rule is exact for polynomials
    /// of degree `2k - 1`.
    pub fn gauss_legendre(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput(
                "Gauss-Legendre rule needs k >= 1".into(),
            ));
        }
        let mut nodes = vec![0.0f64; k];
        let mut weights = vec![0.0f64; k];
        let kf = k as f64;
        for i in 0..k.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(k, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(k, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // x_i are descending on [-1, 1]; map to ascending on [0, 1]
            nodes[i] = 0.5 * (1.0 - x);
            nodes[k - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[k - 1 - i] = 0.5 * w;
        }
        Ok(Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// `(P_k(x), P_k'(x))` via the three-term recurrence.
fn legendre(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
