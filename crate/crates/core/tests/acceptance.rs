//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{commuting_pair, gaussian, rel_err, rng, uniform_vec};
use wkl_core::oracle::{inner_integral_quad, mc_wkl_with};
use wkl_core::random::random_symmetric;
use wkl_core::symmat::stable::{direct_branch, m, series_branch};
use wkl_core::{
    kl_divergence, pushforward_check, sample, solve_potential, wkl_commuting, wkl_divergence,
    wkl_univariate, FlowImpl, Gaussian64 as Gaussian, McConfig, QuadratureRule, StableKind,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fig1_left_grid() -> impl Iterator<Item = f64> {
    (0..200).map(|k| (9 + 10 * k) as f64 / 100.0)
}

fn c1_wkl_constant_under_equal_variance() -> Outcome {
    let mut worst = 0.0f64;
    for s in fig1_left_grid() {
        let mu = Gaussian::univariate(0.0, s).unwrap();
        let nu = Gaussian::univariate(2.0, s).unwrap();
        let general = wkl_divergence(&mu, &nu).map_err(|e| e.to_string())?.total;
        let scalar = wkl_univariate(0.0, s, 2.0, s).map_err(|e| e.to_string())?;
        worst = worst.max((general - 2.0).abs()).max((scalar - 2.0).abs());
    }
    check(
        worst <= 1e-10,
        format!("200 grid points, max |D - 2| = {worst:.3e} (tol 1e-10)"),
    )
}

/// `(σ, KL(N(2,σ²) ‖ N(0,σ²)))` as tabulated for the figure.
const FIG1_LEFT_KL: [(f64, f64); 17] = [
    (19.99, 0.00500500375250157),
    (18.09, 0.00611157100682935),
    (16.09, 0.00772534542916414),
    (14.09, 0.0100741406380256),
    (12.09, 0.0136828760858217),
    (10.09, 0.0196448023290877),
    (9.99, 0.0200400600801002),
    (8.09, 0.030558564725332),
    (6.09, 0.053925652702619),
    (5.99, 0.0557412047346579),
    (4.09, 0.119559304403967),
    (3.09, 0.209465757585279),
    (2.09, 0.457864975618692),
    (1.09, 1.68335998653313),
    (0.989999999999995, 2.04060810121418),
    (0.489999999999995, 8.32986255726798),
    (0.0899999999999963, 246.913580246934),
];

fn c2_kl_matches_table() -> Outcome {
    let mut worst = 0.0f64;
    for &(s, expected) in &FIG1_LEFT_KL {
        let p = Gaussian::univariate(2.0, s).unwrap();
        let q = Gaussian::univariate(0.0, s).unwrap();
        let kl = kl_divergence(&p, &q).map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(kl, expected));
    }
    check(
        worst <= 1e-9,
        format!(
            "{} tabulated rows, max rel err = {worst:.3e} (tol 1e-9)",
            FIG1_LEFT_KL.len()
        ),
    )
}

fn c3_fig1_right_spot_check() -> Outcome {
    let (s, s_opt) = (2.0, 3.0);
    let at_s = Gaussian::univariate(0.0, s).unwrap();
    let at_opt = Gaussian::univariate(0.0, s_opt).unwrap();
    let kl = kl_divergence(&at_s, &at_opt).unwrap();
    let plotted_order = wkl_divergence(&at_s, &at_opt).unwrap().total;
    let legend_order = wkl_divergence(&at_opt, &at_s).unwrap().total;
    let (e_kl, e_wkl) = (
        rel_err(kl, 0.127687330330387),
        rel_err(plotted_order, 0.57459298648674),
    );
    check(
        e_kl <= 1e-9 && e_wkl <= 1e-9,
        format!(
            "KL(N(0,4)||N(0,9)) = {kl:.15} (rel {e_kl:.1e}); tabulated WKL 0.57459298648674 is \
             D(N(0,σ²)||N(0,σ_opt²)) = {plotted_order:.14} (rel {e_wkl:.1e}); \
             the legend order D(N(0,σ_opt²)||N(0,σ²)) would give {legend_order:.6}"
        ),
    )
}

fn c4_transport_residuals() -> Outcome {
    let mut rng = rng(4);
    let (mut riccati, mut mean) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let n = 1 + i % 6;
        let mu = gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        let nu = gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        let sol = solve_potential(&mu, &nu).map_err(|e| e.to_string())?;
        riccati = riccati.max(sol.riccati_residual);
        mean = mean.max(sol.mean_residual);
    }
    check(
        riccati <= 1e-10 && mean <= 1e-10,
        format!("200 pairs, max Riccati residual {riccati:.3e}, max mean residual {mean:.3e} (tol 1e-10)"),
    )
}

fn c5_time_integral_vs_quadrature() -> Outcome {
    let mut rng = rng(5);
    let rule = QuadratureRule::gauss_legendre(32).unwrap();
    let (mut worst_closed, mut worst_rk4) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 1 + i % 4;
        let mu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let nu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let p = solve_potential(&mu, &nu).unwrap().potential;
        let x0 = uniform_vec(&mut rng, n, -2.0, 2.0);
        let exact = p.time_integral(&x0).unwrap();
        let scale = exact.abs().max(1.0);
        let closed = inner_integral_quad(&p, &x0, &rule, FlowImpl::ClosedForm).unwrap();
        let rk4 = inner_integral_quad(&p, &x0, &rule, FlowImpl::Rk4 { steps: 1000 }).unwrap();
        worst_closed = worst_closed.max((closed - exact).abs() / scale);
        worst_rk4 = worst_rk4.max((rk4 - exact).abs() / scale);
    }
    check(
        worst_closed <= 1e-9 && worst_rk4 <= 1e-6,
        format!(
            "100 instances, closed-form flow rel err {worst_closed:.3e} (tol 1e-9), \
             RK4 flow rel err {worst_rk4:.3e} (tol 1e-6)"
        ),
    )
}

fn c6_monte_carlo_agreement() -> Outcome {
    let mut rng = rng(6);
    let (mut within3, mut within5, mut worst) = (0, 0, 0.0f64);
    for i in 0..20u64 {
        let n = 1 + (i as usize) % 3;
        let mu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let nu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let closed = wkl_divergence(&mu, &nu).unwrap().total;
        let est = mc_wkl_with(&mu, &nu, &McConfig::new(100_000, 600 + i).quad_nodes(16)).unwrap();
        let z = (est.mean - closed).abs() / est.stderr;
        worst = worst.max(z);
        within3 += usize::from(z <= 3.0);
        within5 += usize::from(z <= 5.0);
    }
    check(
        within3 >= 19 && within5 == 20,
        format!("20 instances, N=1e5: {within3}/20 within 3 stderr, {within5}/20 within 5, worst {worst:.2} stderr"),
    )
}

fn c7_pushforward() -> Outcome {
    let mut rng = rng(7);
    let mut passed = 0;
    let (mut mean_ratio, mut cov_ratio) = (0.0f64, 0.0f64);
    for i in 0..20u64 {
        let n = 1 + (i as usize) % 3;
        let mu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let nu = gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let rep = pushforward_check(&mu, &nu, 100_000, 700 + i).unwrap();
        passed += usize::from(rep.passed);
        mean_ratio = mean_ratio.max(rep.mean_error / rep.mean_bound);
        cov_ratio = cov_ratio.max(rep.cov_error / rep.cov_bound);
    }
    check(
        passed == 20,
        format!(
            "{passed}/20 pairs inside the envelopes; worst mean error {mean_ratio:.2} and \
             covariance error {cov_ratio:.2} of their bounds"
        ),
    )
}

fn c8_curvature() -> Outcome {
    let h = 1e-3;
    let mut worst_wkl = 0.0f64;
    let mut worst_kl = 0.0f64;
    for s_opt in [0.5, 1.0, 3.0] {
        let d_wkl = |s: f64| wkl_univariate(0.0, s_opt, 0.0, s).unwrap();
        let d_kl = |s: f64| {
            kl_divergence(
                &Gaussian::univariate(0.0, s).unwrap(),
                &Gaussian::univariate(0.0, s_opt).unwrap(),
            )
            .unwrap()
        };
        let fd = |f: &dyn Fn(f64) -> f64| (f(s_opt + h) - 2.0 * f(s_opt) + f(s_opt - h)) / (h * h);
        worst_wkl = worst_wkl.max(rel_err(fd(&d_wkl), 1.0));
        worst_kl = worst_kl.max(rel_err(fd(&d_kl), 2.0 / (s_opt * s_opt)));
    }
    check(
        worst_wkl <= 1e-4 && worst_kl <= 1e-4,
        format!("σ_opt ∈ {{0.5, 1, 3}}: WKL rel err {worst_wkl:.3e}, KL rel err {worst_kl:.3e} (tol 1e-4)"),
    )
}

fn c9_continuity() -> Outcome {
    let mut rng = rng(9);
    let mut last_gap = 0.0f64;
    let mut monotone = true;
    for n in 1..=4 {
        let s0 = wkl_core::random::random_spd(&mut rng, n, 0.5, 4.0).unwrap();
        let e = random_symmetric(&mut rng, n, 1.0);
        let e = e.scale(0.4 / e.matrix().frobenius_norm());
        let d = uniform_vec(&mut rng, n, -2.0, 2.0);
        let limit = 0.5 * d.iter().map(|v| v * v).sum::<f64>();
        let mu = Gaussian::new(vec![0.0; n], s0.clone()).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let nu = Gaussian::new(d.clone(), s0.add(&e.scale(10f64.powi(-k)))).unwrap();
            let gap = (wkl_divergence(&mu, &nu).unwrap().total - limit).abs();
            monotone &= gap <= prev + 1e-14;
            prev = gap;
        }
        last_gap = last_gap.max(prev);
    }
    let mut finite = true;
    let mut uni_gap = 0.0f64;
    for k in 1..=14 {
        let v = wkl_univariate(0.0, 1.3, 1.0, 1.3 + 10f64.powi(-k)).unwrap();
        finite &= v.is_finite();
        if k == 14 {
            uni_gap = (v - 0.5).abs();
        }
    }
    check(
        monotone && last_gap <= 1e-6 && finite && uni_gap <= 1e-12,
        format!(
            "k=10 gap to ½‖d‖² {last_gap:.3e} (tol 1e-6), monotone approach: {monotone}; \
             univariate at |Δσ|=1e-14 finite: {finite}, gap {uni_gap:.1e}"
        ),
    )
}

fn c10_form_equivalence() -> Outcome {
    let mut rng = rng(10);
    let mut worst_commuting = 0.0f64;
    for i in 0..100 {
        let (mu, nu) = commuting_pair(&mut rng, 1 + i % 5);
        let c = wkl_commuting(&mu, &nu).map_err(|e| e.to_string())?.total;
        let g = wkl_divergence(&mu, &nu).unwrap().total;
        worst_commuting = worst_commuting.max(rel_err(c, g));
    }
    let mut worst_uni = 0.0f64;
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 10.0).collect();
    for &s0 in &grid {
        for &s1 in &grid {
            for dmu in [0.0, 1.0, 5.0] {
                let general = wkl_divergence(
                    &Gaussian::univariate(0.0, s0).unwrap(),
                    &Gaussian::univariate(dmu, s1).unwrap(),
                )
                .unwrap()
                .total;
                let scalar = wkl_univariate(0.0, s0, dmu, s1).unwrap();
                if general != 0.0 || scalar != 0.0 {
                    worst_uni = worst_uni.max(rel_err(scalar, general));
                }
            }
        }
    }
    check(
        worst_commuting <= 1e-10 && worst_uni <= 1e-12,
        format!(
            "100 commuting pairs rel err {worst_commuting:.3e} (tol 1e-10); \
             univariate vs n=1 general over 30000 grid points rel err {worst_uni:.3e} (tol 1e-12)"
        ),
    )
}

fn c11_stable_functions() -> Outcome {
    let mut worst = 0.0f64;
    for kind in [
        StableKind::K,
        StableKind::M1,
        StableKind::M2,
        StableKind::Q,
        StableKind::W,
    ] {
        for offset in [1e-3, -1e-3] {
            let x = kind.singular_point() + offset;
            worst = worst.max(rel_err(series_branch(kind, x), direct_branch(kind, x)));
        }
    }
    let min_m = (-10_000..=10_000)
        .map(|i| m(i as f64 * 1e-3))
        .fold(f64::INFINITY, f64::min);
    check(
        worst <= 1e-9 && min_m >= 0.0,
        format!("series vs direct at 1e-3: max rel diff {worst:.3e} (tol 1e-9); min m(a) on [-10, 10] = {min_m:e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    // warm up the sampler so the first timed criterion is not charged for pool start-up
    let _ = sample(&Gaussian::univariate(0.0, 1.0).unwrap(), 10, 0);

    let criteria: [Criterion; 11] = [
        (
            "equal-variance WKL is constant 2 on the σ grid",
            c1_wkl_constant_under_equal_variance,
        ),
        (
            "equal-variance KL matches tabulated values",
            c2_kl_matches_table,
        ),
        (
            "σ=2, σ_opt=3 spot checks and argument order",
            c3_fig1_right_spot_check,
        ),
        (
            "Riccati and mean-transport residuals",
            c4_transport_residuals,
        ),
        (
            "closed time integral vs Gauss-Legendre quadrature",
            c5_time_integral_vs_quadrature,
        ),
        (
            "Monte-Carlo double integral vs closed form",
            c6_monte_carlo_agreement,
        ),
        ("time-one flow pushes μ onto ν", c7_pushforward),
        ("curvature at the optimum", c8_curvature),
        ("continuity at equal covariances", c9_continuity),
        (
            "general, commuting and univariate forms agree",
            c10_form_equivalence,
        ),
        ("stable-function branches and M ⪰ 0", c11_stable_functions),
    ];

    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {:>2}. {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
