use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wkl",
    version,
    about = "Wasserstein KL-divergence between Gaussians: closed form, verification and sweeps"
)]
pub struct Cli {
    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Relative tolerance below which an eigenvalue counts as zero
    #[arg(long = "tol-rank", global = true, default_value_t = 1e-12)]
    pub tol_rank: f64,

    /// Gauss-Legendre nodes for the time integral in Monte-Carlo runs
    #[arg(long = "quad-nodes", global = true, default_value_t = 16)]
    pub quad_nodes: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form WKL-divergence D(mu || nu)
    Wkl(WklArgs),
    /// Classical KL-divergence in an explicit argument order
    Kl(KlArgs),
    /// Check the closed form against a Monte-Carlo estimate of the defining integral
    Verify(VerifyArgs),
    /// Write a CSV parameter sweep
    Sweep(SweepArgs),
    /// Run the built-in invariant checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct WklArgs {
    /// JSON file {"mu": {"mean", "cov"}, "nu": {"mean", "cov"}}
    pub input: PathBuf,

    /// Also print R, Q, W and the transport residuals
    #[arg(long)]
    pub verbose: bool,

    /// Use the simplified formula for commuting covariances
    #[arg(long)]
    pub commuting: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KlOrder {
    /// KL(mu || nu)
    MuNu,
    /// KL(nu || mu)
    NuMu,
}

#[derive(Debug, Args)]
pub struct KlArgs {
    pub input: PathBuf,

    /// Argument order; there is deliberately no default
    #[arg(long, value_enum)]
    pub order: KlOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlowArg {
    Closed,
    Rk4,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "random"])))]
pub struct VerifyArgs {
    pub input: Option<PathBuf>,

    /// Draw a random pair of this dimension from --seed instead of reading a file
    #[arg(long, value_name = "DIM")]
    pub random: Option<usize>,

    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,

    #[arg(long, value_enum, default_value_t = FlowArg::Closed)]
    pub flow: FlowArg,

    /// RK4 steps per unit time when --flow rk4
    #[arg(long = "rk4-steps", default_value_t = 200)]
    pub rk4_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// D(N(0,s^2) || N(2,s^2)) and KL(N(2,s^2) || N(0,s^2)) for s = 0.09, 0.19, ..., 19.99
    #[value(name = "fig1-left", alias = "fig1_left")]
    Fig1Left,
    /// Divergences around N(0, s_opt^2) in both argument orders
    #[value(name = "fig1-right", alias = "fig1_right")]
    Fig1Right,
    /// mu = N(0, s0^2), nu = N(1, s1^2) over s0, s1 in 0.1..4
    #[value(name = "fig2-surface", alias = "fig2_surface")]
    Fig2Surface,
    /// User grid over s0 and s1 with --mu0, --mu1
    Custom,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,

    /// Output CSV path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Reference standard deviations for fig1-right
    #[arg(long = "sigma-opt", value_delimiter = ',', default_values_t = [1.0, 3.0])]
    pub sigma_opt: Vec<f64>,

    /// Grid START:STOP:STEP for sigma0 (custom)
    #[arg(long, default_value = "0.1:4:0.1")]
    pub sigma0: String,

    /// Grid START:STOP:STEP for sigma1 (custom)
    #[arg(long, default_value = "0.1:4:0.1")]
    pub sigma1: String,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu0: f64,

    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu1: f64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Replace the series coefficients with a known-wrong set; the run must fail
    #[arg(long = "inject-series-fault", hide = true)]
    pub inject_series_fault: bool,
}
