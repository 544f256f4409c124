//! Built-in invariant checks, grouped and reported one line per check.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use wkl_core::oracle::mc_wkl_with;
use wkl_core::random::random_spd;
use wkl_core::symmat::stable::{direct_branch, series_branch};
use wkl_core::{
    pushforward_check, solve_potential, wkl_divergence, Gaussian, McConfig, StableKind,
};

use crate::commands::{verdict, within_stderr};
use crate::error::{CliError, Result};
use crate::fmt::report;

/// Supplies the near-singularity branch of the stable kernels.
pub trait SeriesSource {
    fn series(&self, kind: StableKind, x: f64) -> f64;
}

/// The library's own expansions.
pub struct Builtin;

impl SeriesSource for Builtin {
    fn series(&self, kind: StableKind, x: f64) -> f64 {
        series_branch(kind, x)
    }
}

/// Plausible but wrong low-order coefficients (`m1 ≈ 4a + 6a²`, `m2 ≈ 2 + 4a`).
/// A correct self-test must reject them.
pub struct FaultySeries;

impl SeriesSource for FaultySeries {
    fn series(&self, kind: StableKind, x: f64) -> f64 {
        match kind {
            StableKind::M1 => 4.0 * x + 6.0 * x * x,
            StableKind::M2 => 2.0 + 4.0 * x,
            StableKind::M => x * x * (2.0 + 4.0 * x),
            _ => series_branch(kind, x),
        }
    }
}

const SWITCH_RADIUS: f64 = 1e-4;

fn stable(src: &dyn SeriesSource, kind: StableKind, x: f64) -> f64 {
    if (x - kind.singular_point()).abs() <= SWITCH_RADIUS {
        src.series(kind, x)
    } else {
        direct_branch(kind, x)
    }
}

fn slope(kind: StableKind) -> f64 {
    match kind {
        StableKind::K => 0.5,
        StableKind::M => 0.0,
        StableKind::M1 => 2.0,
        StableKind::M2 => 8.0 / 3.0,
        StableKind::Q | StableKind::W => 2.0 / 3.0,
    }
}

pub struct Group {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn continuity(src: &dyn SeriesSource) -> Group {
    let kinds = [
        StableKind::K,
        StableKind::M1,
        StableKind::M2,
        StableKind::Q,
        StableKind::W,
    ];
    let (mut jump, mut branch) = (0.0f64, 0.0f64);
    for kind in kinds {
        let x0 = kind.singular_point();
        let eps = 1e-6;
        let d = stable(src, kind, x0 + eps) - stable(src, kind, x0 - eps);
        jump = jump.max((d - 2.0 * eps * slope(kind)).abs());
        for off in [1e-3, -1e-3, SWITCH_RADIUS, -SWITCH_RADIUS] {
            let x = x0 + off;
            let direct = direct_branch(kind, x);
            branch = branch.max((src.series(kind, x) - direct).abs() / direct.abs());
        }
    }
    let m_ok = (-1000..=1000).all(|i| stable(src, StableKind::M, i as f64 * 1e-2) >= 0.0);
    Group {
        name: "symmat continuity",
        passed: jump <= 1e-8 && branch <= 1e-9 && m_ok,
        detail: format!(
            "jump beyond slope at ±1e-6: {} (limit 1e-8); series vs direct: {} (limit 1e-9); m >= 0: {m_ok}",
            report(jump),
            report(branch)
        ),
    }
}

fn random_gaussian(
    rng: &mut ChaCha20Rng,
    n: usize,
    mean_box: f64,
    lo: f64,
    hi: f64,
) -> Gaussian<f64> {
    let mean = (0..n)
        .map(|_| rng.random_range(-mean_box..=mean_box))
        .collect();
    Gaussian::new(mean, random_spd(rng, n, lo, hi).expect("valid range"))
        .expect("positive definite")
}

fn riccati(seed: u64) -> Group {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (mut ric, mut mean) = (0.0f64, 0.0f64);
    let mut failed = None;
    for i in 0..60 {
        let n = 1 + i % 6;
        let mu = random_gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        let nu = random_gaussian(&mut rng, n, 3.0, 0.1, 10.0);
        match solve_potential(&mu, &nu) {
            Ok(sol) => {
                ric = ric.max(sol.riccati_residual);
                mean = mean.max(sol.mean_residual);
            }
            Err(e) => failed = Some(e.to_string()),
        }
    }
    Group {
        name: "riccati residuals",
        passed: failed.is_none() && ric <= 1e-10 && mean <= 1e-10,
        detail: match failed {
            Some(e) => format!("solver error: {e}"),
            None => format!(
                "60 pairs: covariance {}, mean {} (limit 1e-10)",
                report(ric),
                report(mean)
            ),
        },
    }
}

fn oracle(seed: u64, quad_nodes: usize) -> Group {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed);
    let n_samples = 10_000;
    let mut zs = Vec::new();
    let (mut within3, mut within5, mut pushed) = (0, 0, 0);
    let mut error = None;
    let cases = 6u64;
    for i in 0..cases {
        let n = 1 + (i as usize) % 3;
        let mu = random_gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let nu = random_gaussian(&mut rng, n, 2.0, 0.25, 4.0);
        let run = || -> wkl_core::Result<(f64, f64, f64, bool)> {
            let closed = wkl_divergence(&mu, &nu)?.total;
            let est = mc_wkl_with(
                &mu,
                &nu,
                &McConfig::new(n_samples, seed + i).quad_nodes(quad_nodes),
            )?;
            let push = pushforward_check(&mu, &nu, n_samples, seed + i)?;
            Ok((closed, est.mean, est.stderr, push.passed))
        };
        match run() {
            Ok((closed, mean, stderr, push)) => {
                within3 += usize::from(within_stderr(closed, mean, stderr, 3.0));
                within5 += usize::from(within_stderr(closed, mean, stderr, 5.0));
                pushed += usize::from(push);
                zs.push(if stderr > 0.0 {
                    (mean - closed).abs() / stderr
                } else {
                    0.0
                });
            }
            Err(e) => error = Some(e.to_string()),
        }
    }
    let cases = cases as usize;
    let z_text: Vec<String> = zs.iter().map(|&z| format!("{z:.2}")).collect();
    Group {
        name: "oracle agreement",
        passed: error.is_none() && within3 + 1 >= cases && within5 == cases && pushed == cases,
        detail: match error {
            Some(e) => format!("oracle error: {e}"),
            None => format!(
                "N = {n_samples}: |mc - closed| / stderr = [{}]; {within3}/{cases} within 3, \
                 {within5}/{cases} within 5; pushforward {pushed}/{cases}",
                z_text.join(", ")
            ),
        },
    }
}

pub fn groups(src: &dyn SeriesSource, seed: u64, quad_nodes: usize) -> Vec<Group> {
    vec![continuity(src), riccati(seed), oracle(seed, quad_nodes)]
}

pub fn run_selftest_with(
    src: &dyn SeriesSource,
    seed: u64,
    quad_nodes: usize,
    out: &mut dyn Write,
) -> Result<u8> {
    let results = groups(src, seed, quad_nodes);
    let mut all = true;
    for g in &results {
        all &= g.passed;
        writeln!(out, "[{}] {}: {}", verdict(g.passed), g.name, g.detail)
            .map_err(|e| CliError::write("stdout", e))?;
    }
    writeln!(out, "selftest {}", verdict(all)).map_err(|e| CliError::write("stdout", e))?;
    Ok(if all { 0 } else { 1 })
}
