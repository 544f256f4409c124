use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use wkl_core::oracle::{mc_wkl_with, pushforward_check};
use wkl_core::random::random_spd;
use wkl_core::symmat::RankTolerance;
use wkl_core::wkl::{wkl_commuting_with, wkl_divergence_with};
use wkl_core::{kl_divergence, solve_potential, FlowImpl, Gaussian, McConfig, SymMatrix};

use crate::cli::{FlowArg, KlArgs, KlOrder, VerifyArgs, WklArgs};
use crate::error::{CliError, Result};
use crate::fmt::report;
use crate::input::GaussianPair;

/// Global flags shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub seed: u64,
    pub tol: RankTolerance,
    pub quad_nodes: usize,
}

fn emit(out: &mut dyn Write, text: std::fmt::Arguments) -> Result<()> {
    out.write_fmt(text)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::write("stdout", e))
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {
        emit($out, format_args!($($arg)*))
    };
}

fn print_matrix(out: &mut dyn Write, name: &str, m: &SymMatrix<f64>) -> Result<()> {
    outln!(out, "{name}:")?;
    for row in m.matrix().to_rows() {
        let cells: Vec<String> = row.into_iter().map(report).collect();
        outln!(out, "  [{}]", cells.join(", "))?;
    }
    Ok(())
}

pub fn wkl(args: &WklArgs, settings: &Settings, out: &mut dyn Write) -> Result<u8> {
    let pair = GaussianPair::load(&args.input)?;
    let d = if args.commuting {
        wkl_commuting_with(&pair.mu, &pair.nu, settings.tol)?
    } else {
        wkl_divergence_with(&pair.mu, &pair.nu, settings.tol)?
    };
    outln!(out, "total       {}", report(d.total))?;
    outln!(out, "trace_term  {}", report(d.trace_term))?;
    outln!(out, "mean_term   {}", report(d.mean_term))?;
    if args.verbose {
        print_matrix(out, "R", &d.r)?;
        print_matrix(out, "Q", &d.q)?;
        print_matrix(out, "W", &d.w)?;
        let sol = solve_potential(&pair.mu, &pair.nu)?;
        outln!(out, "riccati_residual  {}", report(sol.riccati_residual))?;
        outln!(out, "mean_residual     {}", report(sol.mean_residual))?;
    }
    Ok(0)
}

pub fn kl(args: &KlArgs, out: &mut dyn Write) -> Result<u8> {
    let pair = GaussianPair::load(&args.input)?;
    let (label, value) = match args.order {
        KlOrder::MuNu => ("KL(mu || nu)", kl_divergence(&pair.mu, &pair.nu)?),
        KlOrder::NuMu => ("KL(nu || mu)", kl_divergence(&pair.nu, &pair.mu)?),
    };
    outln!(out, "{label} = {}", report(value))?;
    Ok(0)
}

/// Random pair with means in `[-2, 2]^dim` and covariance eigenvalues in `[0.25, 4]`.
pub fn random_pair(dim: usize, seed: u64) -> Result<GaussianPair> {
    if dim == 0 {
        return Err(CliError::Usage("--random needs a dimension >= 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha20Rng| -> Result<Gaussian<f64>> {
        let mean = (0..dim).map(|_| rng.random_range(-2.0..=2.0)).collect();
        Ok(Gaussian::new(mean, random_spd(rng, dim, 0.25, 4.0)?)?)
    };
    let mu = draw(&mut rng)?;
    let nu = draw(&mut rng)?;
    GaussianPair::new(mu, nu)
}

/// `|closed − mc| ≤ 3·stderr`, with a rounding floor so that pairs whose
/// integrand is constant (stderr ≈ 0) are judged on floating-point agreement.
pub fn within_stderr(closed: f64, mean: f64, stderr: f64, k: f64) -> bool {
    (closed - mean).abs() <= k * stderr + 1e-12 * closed.abs().max(1.0)
}

pub fn verify(args: &VerifyArgs, settings: &Settings, out: &mut dyn Write) -> Result<u8> {
    let pair = match (&args.input, args.random) {
        (_, Some(dim)) => random_pair(dim, settings.seed)?,
        (Some(path), None) => GaussianPair::load(path)?,
        (None, None) => {
            return Err(CliError::Usage(
                "verify needs an input file or --random".into(),
            ))
        }
    };
    let flow = match args.flow {
        FlowArg::Closed => FlowImpl::ClosedForm,
        FlowArg::Rk4 => FlowImpl::Rk4 {
            steps: args.rk4_steps,
        },
    };
    let closed = wkl_divergence_with(&pair.mu, &pair.nu, settings.tol)?.total;
    let cfg = McConfig::new(args.samples, settings.seed)
        .flow(flow)
        .quad_nodes(settings.quad_nodes);
    let est = mc_wkl_with(&pair.mu, &pair.nu, &cfg)?;
    let push = pushforward_check(&pair.mu, &pair.nu, args.samples, settings.seed)?;

    let agrees = within_stderr(closed, est.mean, est.stderr, 3.0);
    let z = if est.stderr > 0.0 {
        (est.mean - closed).abs() / est.stderr
    } else {
        0.0
    };
    let flow_name = match flow {
        FlowImpl::ClosedForm => "closed".to_string(),
        FlowImpl::Rk4 { steps } => format!("rk4/{steps}"),
    };
    outln!(out, "dimension        {}", pair.mu.dim())?;
    outln!(out, "closed form      {}", report(closed))?;
    outln!(
        out,
        "monte carlo      {} ± {} (N = {}, seed = {}, flow = {flow_name}, nodes = {})",
        report(est.mean),
        report(est.stderr),
        est.n_samples,
        est.seed,
        settings.quad_nodes
    )?;
    outln!(
        out,
        "deviation        {} stderr (limit 3): {}",
        report(z),
        verdict(agrees)
    )?;
    outln!(
        out,
        "pushforward      mean error {} (bound {}), cov error {} (bound {}): {}",
        report(push.mean_error),
        report(push.mean_bound),
        report(push.cov_error),
        report(push.cov_bound),
        verdict(push.passed)
    )?;
    let passed = agrees && push.passed;
    outln!(out, "result           {}", verdict(passed))?;
    Ok(if passed { 0 } else { 1 })
}

pub(crate) fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
