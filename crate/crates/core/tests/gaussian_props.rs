mod common;

use common::{gaussian, rel_err, rng};
use proptest::prelude::*;
use wkl_core::gaussian::{sample_with_block_size, whitened_norm_sq};
use wkl_core::{kl_divergence, sample, stats, Error, Gaussian, SymMatrix};

#[test]
fn kl_figure_values() {
    let p = Gaussian::univariate(2.0, 0.99).unwrap();
    let q = Gaussian::univariate(0.0, 0.99).unwrap();
    assert!(rel_err(kl_divergence(&p, &q).unwrap(), 2.040_608_101_214_18) <= 1e-12);
    let p = Gaussian::univariate(0.0, 2.0).unwrap();
    let q = Gaussian::univariate(0.0, 3.0).unwrap();
    assert!(rel_err(kl_divergence(&p, &q).unwrap(), 0.127_687_330_330_387) <= 1e-12);
}

#[test]
fn kl_equal_covariance_identity() {
    let mut rng = rng(11);
    for n in 1..=6 {
        let a = gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        let b =
            Gaussian::new(common::uniform_vec(&mut rng, n, -3.0, 3.0), a.cov().clone()).unwrap();
        let d: Vec<f64> = b.mean().iter().zip(a.mean()).map(|(x, y)| x - y).collect();
        let expected = 0.5 * whitened_norm_sq(a.cov(), &d).unwrap();
        assert!(rel_err(kl_divergence(&b, &a).unwrap(), expected) <= 1e-10);
    }
}

#[test]
fn kl_curvature_at_optimum() {
    let h = 1e-3;
    for s in [0.5f64, 1.0, 3.0] {
        let f = |x: f64| {
            kl_divergence(
                &Gaussian::univariate(0.7, x).unwrap(),
                &Gaussian::univariate(0.7, s).unwrap(),
            )
            .unwrap()
        };
        let second = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
        let expected = 2.0 / (s * s);
        assert!(
            rel_err(second, expected) <= 1e-4,
            "σ_opt={s}: {second} vs {expected}"
        );
    }
}

#[test]
fn standard_normal_sample_mean_within_clt_bound() {
    let g = Gaussian::new(vec![0.0f64; 3], SymMatrix::identity(3)).unwrap();
    let n = 100_000;
    let s = stats(&sample(&g, n, 17).unwrap()).unwrap();
    let bound = 4.0 / (n as f64).sqrt();
    assert!(
        s.emp_mean.iter().all(|m| m.abs() <= bound),
        "{:?}",
        s.emp_mean
    );
}

#[test]
fn correlated_sample_covariance_is_close() {
    let mut rng = rng(12);
    let g = gaussian(&mut rng, 3, 1.0, 0.5, 3.0);
    let n = 100_000;
    let s = stats(&sample(&g, n, 3).unwrap()).unwrap();
    let err = s.emp_cov.sub(g.cov()).matrix().frobenius_norm();
    let bound = 5.0 * g.cov().matrix().frobenius_norm() * (8.0 / n as f64).sqrt();
    assert!(err <= bound, "{err} > {bound}");
}

#[test]
fn zero_covariance_is_rejected() {
    let err = Gaussian::new(vec![0.0, 0.0], SymMatrix::zeros(2)).unwrap_err();
    assert!(matches!(err, Error::NotPositiveDefinite(_)));
}

#[test]
fn duplicated_points_have_zero_covariance() {
    let pts = vec![vec![1.5, -2.0]; 10];
    let s = stats(&pts).unwrap();
    assert_eq!(s.emp_mean, vec![1.5, -2.0]);
    assert_eq!(s.emp_cov.matrix().max_abs(), 0.0);
    assert!(matches!(stats(&pts[..1]), Err(Error::InvalidInput(_))));
}

#[test]
fn sampling_depends_on_block_size_only_through_configuration() {
    let g = Gaussian::univariate(1.0, 2.0).unwrap();
    let a = sample_with_block_size(&g, 10_000, 5, 1000).unwrap();
    let b = sample_with_block_size(&g, 10_000, 5, 1000).unwrap();
    assert_eq!(a, b);
    // the first block is shared by any block size that covers it
    let c = sample_with_block_size(&g, 10_000, 5, 2000).unwrap();
    assert_eq!(a[..1000], c[..1000]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kl_is_nonnegative(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng(seed);
        let p = gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        let q = gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        prop_assert!(kl_divergence(&p, &q).unwrap() > 0.0);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn json_round_trip_is_bit_identical(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng(seed);
        let g = gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        let text = serde_json::to_string(&g).unwrap();
        let back: Gaussian<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&g, &back);
    }
}
