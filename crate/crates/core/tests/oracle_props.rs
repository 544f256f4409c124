mod common;

use common::{gaussian, rng, uniform_vec};
use wkl_core::oracle::{inner_integral_quad, mc_wkl_with, rk4_flow};
use wkl_core::random::random_orthogonal;
use wkl_core::{
    mc_wkl, pushforward_check, wkl_divergence, FlowImpl, Gaussian, Gaussian64, Matrix, McConfig,
    QuadraticPotential, QuadratureRule, SymMatrix, SymMatrix64,
};

fn random_potential(seed: u64, n: usize) -> (QuadraticPotential<f64>, Vec<f64>) {
    let mut rng = rng(seed);
    let eig = uniform_vec(&mut rng, n, -2.0, 2.0);
    let q: Matrix<f64> = random_orthogonal(&mut rng, n);
    let a = SymMatrix::from_diag(&eig).congruence(&q.transpose());
    let b = uniform_vec(&mut rng, n, -1.0, 1.0);
    let x0 = uniform_vec(&mut rng, n, -2.0, 2.0);
    (QuadraticPotential::new(a, b).unwrap(), x0)
}

#[test]
fn rk4_matches_closed_form_flow() {
    for seed in 0..20 {
        let (p, x0) = random_potential(seed, 3);
        let rk = rk4_flow(&p, &x0, 1.0, 1000).unwrap();
        let exact = p.flow(1.0, &x0).unwrap();
        for (a, b) in rk.iter().zip(&exact) {
            assert!((a - b).abs() <= 1e-8, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn quadrature_is_exact_for_translation_flows() {
    let p = QuadraticPotential::new(SymMatrix64::zeros(3), vec![0.5, -1.0, 2.0]).unwrap();
    for k in [1, 2, 5, 16] {
        let rule = QuadratureRule::gauss_legendre(k).unwrap();
        let v = inner_integral_quad(&p, &[1.0, 2.0, 3.0], &rule, FlowImpl::ClosedForm).unwrap();
        assert!((v - 2.625).abs() <= 1e-14, "k={k}: {v}");
    }
}

#[test]
fn quadrature_matches_time_integral() {
    let rule = QuadratureRule::gauss_legendre(32).unwrap();
    for seed in 0..100 {
        let (p, x0) = random_potential(seed, 3);
        let exact = p.time_integral(&x0).unwrap();
        let quad = inner_integral_quad(&p, &x0, &rule, FlowImpl::ClosedForm).unwrap();
        assert!(
            (quad - exact).abs() <= 1e-9 * exact.abs().max(1.0),
            "seed {seed}: {quad} vs {exact}"
        );
        let rk = inner_integral_quad(&p, &x0, &rule, FlowImpl::Rk4 { steps: 1000 }).unwrap();
        assert!(
            (rk - exact).abs() <= 1e-6,
            "seed {seed}: rk4 {rk} vs {exact}"
        );
    }
}

#[test]
fn mc_of_identical_measures_is_exactly_zero() {
    let mut rng = rng(1);
    let g = gaussian(&mut rng, 3, 2.0, 0.25, 4.0);
    let est = mc_wkl(&g, &g, 500, 1, FlowImpl::ClosedForm).unwrap();
    assert_eq!((est.mean, est.stderr), (0.0, 0.0));
}

#[test]
fn mc_certifies_univariate_examples() {
    let cases = [
        (
            Gaussian64::univariate(0.0, 1.0).unwrap(),
            Gaussian64::univariate(2.0, 1.0).unwrap(),
            2.0,
        ),
        (
            Gaussian64::univariate(0.0, 1.0).unwrap(),
            Gaussian64::univariate(0.0, 2.0).unwrap(),
            0.636_294_361_119_890_6,
        ),
    ];
    for (mu, nu, expected) in cases {
        let closed = wkl_divergence(&mu, &nu).unwrap().total;
        assert!((closed - expected).abs() <= 1e-14);
        let est = mc_wkl(&mu, &nu, 100_000, 2024, FlowImpl::ClosedForm).unwrap();
        assert!(
            (est.mean - closed).abs() <= 3.0 * est.stderr,
            "{} ± {} vs {closed}",
            est.mean,
            est.stderr
        );
    }
}

#[test]
fn flow_implementations_agree_on_shared_samples() {
    let mut rng = rng(3);
    for n in 1..=3 {
        let mu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let nu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let closed = mc_wkl(&mu, &nu, 2000, 8, FlowImpl::ClosedForm).unwrap();
        let rk = mc_wkl(&mu, &nu, 2000, 8, FlowImpl::Rk4 { steps: 200 }).unwrap();
        assert!(
            (closed.mean - rk.mean).abs() <= 1e-6,
            "n={n}: {} vs {}",
            closed.mean,
            rk.mean
        );
    }
}

#[test]
fn mc_is_independent_of_thread_count() {
    let mu = Gaussian64::univariate(0.5, 1.5).unwrap();
    let nu = Gaussian64::univariate(-1.0, 0.7).unwrap();
    let cfg = McConfig::new(20_000, 77).block_size(1024);
    let parallel = mc_wkl_with(&mu, &nu, &cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let serial = pool.install(|| mc_wkl_with(&mu, &nu, &cfg).unwrap());
    assert_eq!(parallel, serial);
}

#[test]
fn pushforward_examples() {
    let mu = Gaussian64::univariate(0.0, 1.0).unwrap();
    let nu = Gaussian64::univariate(3.0, 2.0).unwrap();
    let rep = pushforward_check(&mu, &nu, 100_000, 5).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!((rep.stats.emp_mean[0] - 3.0).abs() <= rep.mean_bound);

    let mut rng = rng(9);
    let mu = gaussian(&mut rng, 3, 2.0, 0.25, 4.0);
    let nu = gaussian(&mut rng, 3, 2.0, 0.25, 4.0);
    assert!(pushforward_check(&mu, &nu, 100_000, 6).unwrap().passed);
}

#[test]
fn oracle_input_validation() {
    let g = Gaussian64::univariate(0.0, 1.0).unwrap();
    let p = QuadraticPotential::new(SymMatrix::identity(2), vec![0.0, 0.0]).unwrap();
    let rule = QuadratureRule::gauss_legendre(4).unwrap();
    assert!(rk4_flow(&p, &[1.0], 1.0, 10).is_err());
    assert!(inner_integral_quad(&p, &[1.0], &rule, FlowImpl::ClosedForm).is_err());
    assert!(inner_integral_quad(&p, &[1.0, 0.0], &rule, FlowImpl::Rk4 { steps: 0 }).is_err());
    assert!(mc_wkl(&g, &g, 10, 0, FlowImpl::ClosedForm).is_err());
    let h = Gaussian::new(vec![0.0, 0.0], SymMatrix::identity(2)).unwrap();
    assert!(mc_wkl(&g, &h, 1000, 0, FlowImpl::ClosedForm).is_err());
}
